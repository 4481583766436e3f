#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "bns/asymptotics.hpp"
#include "bns/model.hpp"

namespace bns {

/// Replicated simulate-then-estimate experiment. Each replication owns the
/// stream keyed by (seed, replication index), so results do not depend on
/// execution order or thread count.
struct McExperimentConfig {
    Model model;
    std::size_t n = 0;         // observations per replication
    std::size_t m = 0;         // replications
    std::uint64_t seed = 0;
    int bins = 40;
    int subgrid = 16;          // IG-OU only

    void validate() const;
};

McExperimentConfig mc_config_from_json_text(const std::string& text);
McExperimentConfig mc_config_from_json_file(const std::string& path);

struct Histogram {
    std::string label;
    double truth = 0.0;
    double asymptotic_sd = 0.0;  // s_i / sqrt(n), the overlay scale
    std::vector<double> bin_left, bin_right;
    std::vector<std::size_t> count;
    std::vector<double> normal_density;  // overlay evaluated at bin centers
};

struct McReport {
    std::array<std::string, 6> labels{};
    std::array<double, 6> truth{};
    std::vector<std::array<double, 6>> estimates;  // gate-passing replications
    std::size_t gate_failures = 0;
    std::size_t replications = 0;
    std::array<double, 6> mean{}, sd{}, rmse{};
    std::vector<Histogram> histograms;
    AsymptoticReport asymptotics;
};

McReport run_mc_experiment(const McExperimentConfig& cfg);

/// Writes report.json, one hist_<label>.csv per parameter and a gnuplot
/// script rendering the six histogram/overlay panels.
void write_mc_outputs(const McReport& report, const std::string& out_dir);

std::string mc_report_to_json_text(const McReport& report);

}  // namespace bns
