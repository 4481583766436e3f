#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bns/model.hpp"
#include "bns/rng.hpp"

namespace bns {

/// Equidistant paired observations (X_i, V_i), i = 1..n, plus the initial
/// variance V_0 the estimator needs for its lagged sums. Simulated series also
/// carry the BDLP increments Z_i and integrated-variance increments Y_i.
struct ObservationSeries {
    double delta_t = 0.0;
    double v0 = 0.0;
    std::vector<double> x;
    std::vector<double> v;
    std::vector<double> z;  // optional, empty when not tracked
    std::vector<double> y;  // optional, empty when not tracked

    std::size_t size() const { return x.size(); }
    bool has_z() const { return !z.empty(); }
    bool has_y() const { return !y.empty(); }

    void validate() const;
};

struct SimConfig {
    Model model;
    std::size_t n = 0;
    std::uint64_t seed = 0;
    int subgrid = 16;  // IG-OU BDLP refinement per grid cell

    void validate() const;
};

SimConfig sim_config_from_json_text(const std::string& text);
SimConfig sim_config_from_json_file(const std::string& path);

/// One draw from the stationary variance law. Requires a named model; the
/// generic kind carries no sampleable distribution.
double draw_stationary_v0(const Model& model, Rng& rng);

/// Exact Gamma-OU path: BDLP jump times by exponential inter-arrivals at rate
/// lambda*nu, sizes Exp(alpha); U_i, S_i, Z_i accumulated in closed form from
/// the jump positions, so the discrete skeleton has no discretization bias.
ObservationSeries simulate_gamma_ou(const SimConfig& cfg);

/// IG-OU path: per grid cell the BDLP increment is built on `subgrid`
/// subcells, each carrying an exact IG-subordinator increment plus an exact
/// compound-Poisson increment, with the subcell mass weighted as if placed at
/// the subcell midpoint. The midpoint placement leaves an O(dt/subgrid) bias
/// in U_i and S_i; Z_i is exact.
ObservationSeries simulate_ig_ou(const SimConfig& cfg);

/// Dispatches on cfg.model.kind.
ObservationSeries simulate(const SimConfig& cfg);

/// One-step building block: simulates a single grid cell from V0 = v0 and
/// returns (X1, V1, Z1, Y1). Streams are the caller's.
struct OneStep {
    double x1, v1, z1, y1, u1, s1;
};
OneStep simulate_one_step_gamma_ou(const Model& model, double v0, Rng& jump_rng,
                                   Rng& wiener_rng);

/// Per-subcell BDLP masses of one IG-OU grid cell, finest first. Exposed so
/// subgrid-convergence checks can aggregate the same draws at two
/// resolutions.
std::vector<double> sample_ig_bdlp_masses(const IGOUParams& ou, double lambda,
                                          double delta_t, int subgrid, Rng& rng);

/// (Z1, U1, S1) for one IG-OU cell given precomputed subcell masses, weights
/// evaluated at subcell midpoints.
struct CellIncrements {
    double z1, u1, s1;
};
CellIncrements weigh_ig_masses(const std::vector<double>& masses, double lambda,
                               double delta_t);

}  // namespace bns
