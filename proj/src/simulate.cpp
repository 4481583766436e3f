#include "bns/simulate.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace bns {

namespace {

// Stream ids within one path; replications derive their own seed first.
constexpr std::uint64_t kJumpStream = 1;
constexpr std::uint64_t kWienerStream = 2;
constexpr std::uint64_t kInitialStream = 3;

}  // namespace

void ObservationSeries::validate() const {
    if (!(delta_t > 0.0)) throw std::invalid_argument("delta_t must be positive");
    if (v0 < 0.0) throw std::invalid_argument("v0 must be nonnegative");
    if (v.size() != x.size()) throw std::invalid_argument("x and v lengths differ");
    if (!z.empty() && z.size() != x.size())
        throw std::invalid_argument("z length differs from x");
    if (!y.empty() && y.size() != x.size())
        throw std::invalid_argument("y length differs from x");
    for (double vi : v) {
        if (vi < 0.0) throw std::invalid_argument("variance path must be nonnegative");
    }
}

void SimConfig::validate() const {
    model.params.validate();
    if (n < 1) throw std::invalid_argument("n must be >= 1");
    if (subgrid < 1) throw std::invalid_argument("subgrid must be >= 1");
    if (model.kind == ModelKind::generic) {
        throw std::invalid_argument(
            "generic models carry no sampleable stationary law; use gamma_ou or ig_ou");
    }
}

SimConfig sim_config_from_json_text(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::invalid_argument(std::string("invalid JSON: ") + e.what());
    }
    SimConfig cfg;
    cfg.model = model_from_json_text(text);
    if (!j.contains("n")) throw std::invalid_argument("missing key 'n'");
    cfg.n = j["n"].get<std::size_t>();
    if (!j.contains("seed")) throw std::invalid_argument("missing key 'seed'");
    cfg.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("subgrid")) cfg.subgrid = j["subgrid"].get<int>();
    cfg.validate();
    return cfg;
}

SimConfig sim_config_from_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config file '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return sim_config_from_json_text(buffer.str());
}

double draw_stationary_v0(const Model& model, Rng& rng) {
    switch (model.kind) {
        case ModelKind::gamma_ou:
            return rng.gamma(model.gamma_ou.nu, 1.0 / model.gamma_ou.alpha);
        case ModelKind::ig_ou:
            return rng.inverse_gaussian(model.ig_ou.delta_ig, model.ig_ou.gamma_ig);
        case ModelKind::generic:
            throw std::invalid_argument(
                "generic models carry no sampleable stationary law");
    }
    throw std::invalid_argument("unknown model kind");
}

namespace {

// Exponential inter-arrival clock for the compound-Poisson BDLP of the
// Gamma-OU model: rate lambda*nu per unit time, jump sizes Exp(alpha).
struct GammaOuJumpClock {
    double rate;
    double alpha;
    double next_time;

    GammaOuJumpClock(const Model& model, Rng& rng)
        : rate(model.params.lambda * model.gamma_ou.nu), alpha(model.gamma_ou.alpha),
          next_time(0.0) {
        next_time = rng.exponential(rate);
    }

    // Accumulates Z, U, S over (t_end - dt, t_end]; weights use the exact jump
    // positions, so the cell increments carry no discretization bias.
    CellIncrements cell(double t_end, double lambda, Rng& rng) {
        CellIncrements inc{0.0, 0.0, 0.0};
        while (next_time <= t_end) {
            const double size = rng.exponential(alpha);
            const double decay = std::exp(-lambda * (t_end - next_time));
            inc.z1 += size;
            inc.u1 += size * decay;
            inc.s1 += size * (1.0 - decay) / lambda;
            next_time += rng.exponential(rate);
        }
        return inc;
    }
};

ObservationSeries assemble_path(const SimConfig& cfg, double v0,
                                const std::vector<CellIncrements>& cells,
                                Rng& wiener_rng) {
    const ModelParams& p = cfg.model.params;
    const double gamma = p.gamma();
    const double eps = p.epsilon();
    ObservationSeries series;
    series.delta_t = p.delta_t;
    series.v0 = v0;
    series.x.reserve(cfg.n);
    series.v.reserve(cfg.n);
    series.z.reserve(cfg.n);
    series.y.reserve(cfg.n);
    double v_prev = v0;
    for (std::size_t i = 0; i < cfg.n; ++i) {
        const CellIncrements& inc = cells[i];
        const double vi = gamma * v_prev + inc.u1;
        const double yi = eps * v_prev + inc.s1;
        const double wi = wiener_rng.normal();
        const double xi = p.mu * p.delta_t + p.beta * yi + std::sqrt(yi) * wi +
                          p.rho * inc.z1;
        series.v.push_back(vi);
        series.y.push_back(yi);
        series.z.push_back(inc.z1);
        series.x.push_back(xi);
        v_prev = vi;
    }
    return series;
}

}  // namespace

ObservationSeries simulate_gamma_ou(const SimConfig& cfg) {
    cfg.validate();
    if (cfg.model.kind != ModelKind::gamma_ou) {
        throw std::invalid_argument("simulate_gamma_ou needs a gamma_ou model");
    }
    Rng jump_rng(cfg.seed, kJumpStream);
    Rng wiener_rng(cfg.seed, kWienerStream);
    Rng init_rng(cfg.seed, kInitialStream);

    const double v0 = draw_stationary_v0(cfg.model, init_rng);
    GammaOuJumpClock clock(cfg.model, jump_rng);
    std::vector<CellIncrements> cells(cfg.n);
    for (std::size_t i = 0; i < cfg.n; ++i) {
        const double t_end = static_cast<double>(i + 1) * cfg.model.params.delta_t;
        cells[i] = clock.cell(t_end, cfg.model.params.lambda, jump_rng);
    }
    return assemble_path(cfg, v0, cells, wiener_rng);
}

OneStep simulate_one_step_gamma_ou(const Model& model, double v0, Rng& jump_rng,
                                   Rng& wiener_rng) {
    if (model.kind != ModelKind::gamma_ou) {
        throw std::invalid_argument("one-step simulation needs a gamma_ou model");
    }
    const ModelParams& p = model.params;
    GammaOuJumpClock clock(model, jump_rng);
    const CellIncrements inc = clock.cell(p.delta_t, p.lambda, jump_rng);
    const double v1 = p.gamma() * v0 + inc.u1;
    const double y1 = p.epsilon() * v0 + inc.s1;
    const double w1 = wiener_rng.normal();
    const double x1 = p.mu * p.delta_t + p.beta * y1 + std::sqrt(y1) * w1 +
                      p.rho * inc.z1;
    return OneStep{x1, v1, inc.z1, y1, inc.u1, inc.s1};
}

std::vector<double> sample_ig_bdlp_masses(const IGOUParams& ou, double lambda,
                                          double delta_t, int subgrid, Rng& rng) {
    ou.validate();
    if (subgrid < 1) throw std::invalid_argument("subgrid must be >= 1");
    // Z over one grid cell runs on lambda*delta_t of BDLP time. Per subcell:
    // an IG(delta/2 * dt_z, gamma) increment plus a compound-Poisson increment
    // with intensity delta*gamma/2 and Gamma(1/2, rate gamma^2/2) jumps; the
    // Poisson jumps within a subcell collapse to one Gamma(N/2, .) draw.
    const double dt_z = lambda * delta_t / static_cast<double>(subgrid);
    const double ig_shape_scale = 0.5 * ou.delta_ig * dt_z;
    const double cp_mean = 0.5 * ou.delta_ig * ou.gamma_ig * dt_z;
    const double jump_scale = 2.0 / (ou.gamma_ig * ou.gamma_ig);
    std::vector<double> masses(static_cast<std::size_t>(subgrid));
    for (auto& mass : masses) {
        mass = rng.inverse_gaussian(ig_shape_scale, ou.gamma_ig);
        const std::uint64_t jumps = rng.poisson(cp_mean);
        if (jumps > 0) {
            mass += rng.gamma(0.5 * static_cast<double>(jumps), jump_scale);
        }
    }
    return masses;
}

CellIncrements weigh_ig_masses(const std::vector<double>& masses, double lambda,
                               double delta_t) {
    const int subgrid = static_cast<int>(masses.size());
    CellIncrements inc{0.0, 0.0, 0.0};
    const double width = delta_t / static_cast<double>(subgrid);
    for (int k = 0; k < subgrid; ++k) {
        // Subcell mass applied at the midpoint; time to the cell's right edge.
        const double remaining = delta_t - (static_cast<double>(k) + 0.5) * width;
        const double decay = std::exp(-lambda * remaining);
        const double mass = masses[static_cast<std::size_t>(k)];
        inc.z1 += mass;
        inc.u1 += mass * decay;
        inc.s1 += mass * (1.0 - decay) / lambda;
    }
    return inc;
}

ObservationSeries simulate_ig_ou(const SimConfig& cfg) {
    cfg.validate();
    if (cfg.model.kind != ModelKind::ig_ou) {
        throw std::invalid_argument("simulate_ig_ou needs an ig_ou model");
    }
    Rng jump_rng(cfg.seed, kJumpStream);
    Rng wiener_rng(cfg.seed, kWienerStream);
    Rng init_rng(cfg.seed, kInitialStream);

    const double v0 = draw_stationary_v0(cfg.model, init_rng);
    const ModelParams& p = cfg.model.params;
    std::vector<CellIncrements> cells(cfg.n);
    for (std::size_t i = 0; i < cfg.n; ++i) {
        const auto masses = sample_ig_bdlp_masses(cfg.model.ig_ou, p.lambda, p.delta_t,
                                                  cfg.subgrid, jump_rng);
        cells[i] = weigh_ig_masses(masses, p.lambda, p.delta_t);
    }
    return assemble_path(cfg, v0, cells, wiener_rng);
}

ObservationSeries simulate(const SimConfig& cfg) {
    switch (cfg.model.kind) {
        case ModelKind::gamma_ou: return simulate_gamma_ou(cfg);
        case ModelKind::ig_ou: return simulate_ig_ou(cfg);
        case ModelKind::generic: break;
    }
    throw std::invalid_argument(
        "generic models carry no sampleable stationary law; use gamma_ou or ig_ou");
}

}  // namespace bns
