#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "bns/asymptotics.hpp"
#include "bns/csv.hpp"
#include "bns/estimator.hpp"
#include "bns/mc.hpp"
#include "bns/model.hpp"
#include "bns/moments.hpp"
#include "bns/simulate.hpp"

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitDegenerate = 3;

int cmd_simulate(const std::string& config_path, std::optional<std::uint64_t> seed,
                 const std::string& out_path) {
    bns::SimConfig cfg = bns::sim_config_from_json_file(config_path);
    if (seed) cfg.seed = *seed;
    const bns::ObservationSeries series = bns::simulate(cfg);
    bns::series_to_csv_file(series, out_path);
    std::cout << out_path << "\n";
    return 0;
}

int cmd_estimate(const std::string& csv_path, const std::string& model) {
    const bns::ObservationSeries series = bns::series_from_csv_file(csv_path);
    const bns::Estimate est =
        bns::estimate(series, bns::model_kind_from_string(model));
    std::cout << bns::estimate_to_json_text(est) << "\n";
    if (!est.result.ok()) {
        for (const auto& reason : est.result.gate.failures) {
            std::cerr << "degenerate: " << reason << "\n";
        }
        return kExitDegenerate;
    }
    return 0;
}

int cmd_asymptotics(const std::string& config_path, const std::string& model_override) {
    const bns::Model model = bns::model_from_json_file(config_path);
    const bns::ModelKind parametrization =
        model_override.empty() ? model.kind
                               : bns::model_kind_from_string(model_override);
    bns::MomentEngine engine(model.params, model.cumulants());
    const bns::AsymptoticReport report =
        bns::asymptotic_covariance(engine, parametrization);
    std::cout << bns::report_to_json_text(report) << "\n";
    return 0;
}

int cmd_mc(const std::string& config_path, std::optional<std::uint64_t> seed,
           std::optional<std::size_t> replications, std::optional<std::size_t> length,
           std::optional<int> bins, const std::string& out_dir) {
    bns::McExperimentConfig cfg = bns::mc_config_from_json_file(config_path);
    if (seed) cfg.seed = *seed;
    if (replications) cfg.m = *replications;
    if (length) cfg.n = *length;
    if (bins) cfg.bins = *bins;
    cfg.validate();
    const bns::McReport report = bns::run_mc_experiment(cfg);
    bns::write_mc_outputs(report, out_dir);
    std::cout << bns::mc_report_to_json_text(report) << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"BNS stochastic volatility models: simulation, moment-based "
                 "estimation and asymptotic covariance"};
    app.require_subcommand(1);

    std::string config_path, csv_path, out_path = "series.csv", out_dir = "mc_out";
    std::string model = "generic", model_override;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> replications, length;
    std::optional<int> bins;

    auto* sim = app.add_subcommand("simulate", "simulate a sample path to CSV");
    sim->add_option("--config", config_path, "simulation config JSON")->required();
    sim->add_option("--seed", seed, "override the config seed")->envname("BNS_SEED");
    sim->add_option("--out", out_path, "output CSV path");

    auto* est = app.add_subcommand("estimate", "estimate parameters from a series CSV");
    est->add_option("--csv", csv_path, "observation series CSV")->required();
    est->add_option("--model", model, "parametrization of the reported estimates")
        ->check(CLI::IsMember({"generic", "gamma_ou", "ig_ou"}));

    auto* asy = app.add_subcommand("asymptotics",
                                   "asymptotic covariance report for a parameter set");
    asy->add_option("--config", config_path, "model parameter JSON")->required();
    asy->add_option("--model", model_override,
                    "parametrization of the report (defaults to the file's)")
        ->check(CLI::IsMember({"generic", "gamma_ou", "ig_ou"}));

    auto* mc = app.add_subcommand("mc", "replicated simulate-and-estimate experiment");
    mc->add_option("--config", config_path, "experiment config JSON")->required();
    mc->add_option("--seed", seed, "override the config seed")->envname("BNS_SEED");
    mc->add_option("--replications", replications, "override replication count");
    mc->add_option("--length", length, "override observations per replication");
    mc->add_option("--bins", bins, "override histogram bin count");
    mc->add_option("--out", out_dir, "output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : kExitUsage;
    }

    try {
        if (sim->parsed()) return cmd_simulate(config_path, seed, out_path);
        if (est->parsed()) return cmd_estimate(csv_path, model);
        if (asy->parsed()) return cmd_asymptotics(config_path, model_override);
        if (mc->parsed()) return cmd_mc(config_path, seed, replications, length, bins, out_dir);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return kExitUsage;
}
