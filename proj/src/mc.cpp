#include "bns/mc.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "bns/estimator.hpp"

namespace bns {

void McExperimentConfig::validate() const {
    model.params.validate();
    if (m < 1) throw std::invalid_argument("m must be >= 1");
    if (n < 2) throw std::invalid_argument("n must be >= 2");
    if (bins < 1) throw std::invalid_argument("bins must be >= 1");
    if (subgrid < 1) throw std::invalid_argument("subgrid must be >= 1");
    if (model.kind == ModelKind::generic) {
        throw std::invalid_argument(
            "generic models carry no sampleable stationary law; use gamma_ou or ig_ou");
    }
}

McExperimentConfig mc_config_from_json_text(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::invalid_argument(std::string("invalid JSON: ") + e.what());
    }
    McExperimentConfig cfg;
    cfg.model = model_from_json_text(text);
    if (!j.contains("n")) throw std::invalid_argument("missing key 'n'");
    cfg.n = j["n"].get<std::size_t>();
    if (!j.contains("m")) throw std::invalid_argument("missing key 'm'");
    cfg.m = j["m"].get<std::size_t>();
    if (!j.contains("seed")) throw std::invalid_argument("missing key 'seed'");
    cfg.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("bins")) cfg.bins = j["bins"].get<int>();
    if (j.contains("subgrid")) cfg.subgrid = j["subgrid"].get<int>();
    cfg.validate();
    return cfg;
}

McExperimentConfig mc_config_from_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config file '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return mc_config_from_json_text(buffer.str());
}

namespace {

std::array<double, 6> truth_vector(const Model& model) {
    const ModelParams& p = model.params;
    switch (model.kind) {
        case ModelKind::gamma_ou:
            return {model.gamma_ou.nu, model.gamma_ou.alpha, p.lambda, p.mu, p.beta, p.rho};
        case ModelKind::ig_ou:
            return {model.ig_ou.delta_ig, model.ig_ou.gamma_ig, p.lambda, p.mu, p.beta,
                    p.rho};
        case ModelKind::generic:
            break;
    }
    return {p.lambda, p.zeta, p.eta, p.mu, p.beta, p.rho};
}

std::array<double, 6> estimate_vector(const Estimate& est) {
    const ModelParams& t = *est.result.theta;
    switch (est.kind) {
        case ModelKind::gamma_ou:
            return {est.gamma_ou->nu, est.gamma_ou->alpha, t.lambda, t.mu, t.beta, t.rho};
        case ModelKind::ig_ou:
            return {est.ig_ou->delta_ig, est.ig_ou->gamma_ig, t.lambda, t.mu, t.beta,
                    t.rho};
        case ModelKind::generic:
            break;
    }
    return {t.lambda, t.zeta, t.eta, t.mu, t.beta, t.rho};
}

}  // namespace

McReport run_mc_experiment(const McExperimentConfig& cfg) {
    cfg.validate();

    McReport report;
    report.replications = cfg.m;
    report.truth = truth_vector(cfg.model);
    {
        MomentEngine engine(cfg.model.params, cfg.model.cumulants());
        report.asymptotics = asymptotic_covariance(engine, cfg.model.kind);
    }
    report.labels = report.asymptotics.labels;

    // One slot per replication; streams are keyed by (seed, replication), so
    // the content of each slot is independent of scheduling.
    struct Slot {
        bool ok = false;
        std::array<double, 6> value{};
    };
    std::vector<Slot> slots(cfg.m);

    auto worker_body = [&](std::size_t rep) {
        SimConfig sim;
        sim.model = cfg.model;
        sim.n = cfg.n;
        sim.seed = derive_seed(cfg.seed, rep);
        sim.subgrid = cfg.subgrid;
        const ObservationSeries series = simulate(sim);
        const Estimate est = estimate(series, cfg.model.kind);
        if (est.result.ok()) {
            slots[rep].ok = true;
            slots[rep].value = estimate_vector(est);
        }
    };

    std::size_t workers =
        std::min<std::size_t>(std::max(1u, std::thread::hardware_concurrency()), cfg.m);
    if (const char* env = std::getenv("BNS_THREADS")) {
        const long requested = std::strtol(env, nullptr, 10);
        if (requested >= 1) workers = std::min<std::size_t>(static_cast<std::size_t>(requested), cfg.m);
    }
    if (workers <= 1) {
        for (std::size_t rep = 0; rep < cfg.m; ++rep) worker_body(rep);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (std::size_t rep = next.fetch_add(1); rep < cfg.m;
                     rep = next.fetch_add(1)) {
                    worker_body(rep);
                }
            });
        }
        for (auto& t : pool) t.join();
    }

    // Reduce in replication order.
    for (const Slot& slot : slots) {
        if (slot.ok) {
            report.estimates.push_back(slot.value);
        } else {
            ++report.gate_failures;
        }
    }

    const double m_ok = static_cast<double>(report.estimates.size());
    if (m_ok > 0) {
        for (std::size_t p = 0; p < 6; ++p) {
            double mean = 0.0, sq = 0.0;
            for (const auto& est : report.estimates) {
                mean += est[p];
                const double err = est[p] - report.truth[p];
                sq += err * err;
            }
            mean /= m_ok;
            report.mean[p] = mean;
            report.rmse[p] = std::sqrt(sq / m_ok);
            if (m_ok > 1) {
                double var = 0.0;
                for (const auto& est : report.estimates) {
                    const double d = est[p] - mean;
                    var += d * d;
                }
                report.sd[p] = std::sqrt(var / (m_ok - 1.0));
            }
        }
    }

    // Histograms over the gate-passing estimates, overlaid with the normal
    // density centered at the truth and scaled by the asymptotic sd.
    for (std::size_t p = 0; p < 6; ++p) {
        Histogram h;
        h.label = report.labels[p];
        h.truth = report.truth[p];
        h.asymptotic_sd =
            report.asymptotics.s[p] / std::sqrt(static_cast<double>(cfg.n));
        if (!report.estimates.empty()) {
            double lo = report.estimates.front()[p], hi = lo;
            for (const auto& est : report.estimates) {
                lo = std::min(lo, est[p]);
                hi = std::max(hi, est[p]);
            }
            if (hi <= lo) hi = lo + 1.0;
            const double width = (hi - lo) / cfg.bins;
            h.bin_left.resize(static_cast<std::size_t>(cfg.bins));
            h.bin_right.resize(static_cast<std::size_t>(cfg.bins));
            h.count.assign(static_cast<std::size_t>(cfg.bins), 0);
            h.normal_density.resize(static_cast<std::size_t>(cfg.bins));
            for (int b = 0; b < cfg.bins; ++b) {
                h.bin_left[static_cast<std::size_t>(b)] = lo + b * width;
                h.bin_right[static_cast<std::size_t>(b)] = lo + (b + 1) * width;
                const double center = lo + (b + 0.5) * width;
                const double u = (center - h.truth) / h.asymptotic_sd;
                h.normal_density[static_cast<std::size_t>(b)] =
                    std::exp(-0.5 * u * u) /
                    (h.asymptotic_sd * std::sqrt(2.0 * std::numbers::pi));
            }
            for (const auto& est : report.estimates) {
                int b = static_cast<int>((est[p] - lo) / width);
                b = std::clamp(b, 0, cfg.bins - 1);
                ++h.count[static_cast<std::size_t>(b)];
            }
        }
        report.histograms.push_back(std::move(h));
    }
    return report;
}

std::string mc_report_to_json_text(const McReport& report) {
    nlohmann::json j;
    j["order"] = report.labels;
    j["truth"] = report.truth;
    j["replications"] = report.replications;
    j["gate_failures"] = report.gate_failures;
    j["mean"] = report.mean;
    j["sd"] = report.sd;
    j["rmse"] = report.rmse;
    j["asymptotic_s"] = report.asymptotics.s;
    return j.dump(2);
}

namespace {

std::string format_double(double value) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", value);
    return buf;
}

}  // namespace

void write_mc_outputs(const McReport& report, const std::string& out_dir) {
    namespace fs = std::filesystem;
    fs::create_directories(out_dir);

    {
        std::ofstream out(fs::path(out_dir) / "report.json", std::ios::binary);
        if (!out) throw std::runtime_error("cannot write report.json");
        out << mc_report_to_json_text(report) << "\n";
    }

    for (const Histogram& h : report.histograms) {
        std::ofstream out(fs::path(out_dir) / ("hist_" + h.label + ".csv"),
                          std::ios::binary);
        if (!out) throw std::runtime_error("cannot write histogram for " + h.label);
        out << "bin_left,bin_right,count,normal_density\n";
        for (std::size_t b = 0; b < h.count.size(); ++b) {
            out << format_double(h.bin_left[b]) << ',' << format_double(h.bin_right[b])
                << ',' << h.count[b] << ',' << format_double(h.normal_density[b]) << "\n";
        }
    }

    std::ofstream gp(fs::path(out_dir) / "plot.gp", std::ios::binary);
    if (!gp) throw std::runtime_error("cannot write plot.gp");
    gp << "# gnuplot script: histogram of each estimate with its asymptotic "
          "normal overlay\n";
    gp << "set datafile separator ','\n";
    gp << "set style fill solid 0.4\n";
    gp << "set terminal pngcairo size 1200,800\n";
    gp << "set output 'estimates.png'\n";
    gp << "set multiplot layout 2,3\n";
    const std::size_t m_ok = report.replications - report.gate_failures;
    for (const Histogram& h : report.histograms) {
        const double width =
            h.bin_right.empty() ? 1.0 : h.bin_right.front() - h.bin_left.front();
        gp << "set title '" << h.label << "'\n";
        gp << "plot 'hist_" << h.label << ".csv' skip 1 using "
           << "(($1+$2)/2):($3/(" << static_cast<double>(m_ok) << "*" << width
           << ")) with boxes title 'empirical', \\\n"
           << "     '' skip 1 using (($1+$2)/2):4 with lines lw 2 title 'asymptotic'\n";
    }
    gp << "unset multiplot\n";
}

}  // namespace bns
