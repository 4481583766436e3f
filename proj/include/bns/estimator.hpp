#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "bns/model.hpp"
#include "bns/simulate.hpp"

namespace bns {

/// The eight sample averages feeding the closed-form solver:
///   xi^1..xi^6 = mean of V_i, V_i V_{i-1}, V_i^2, X_i, X_i V_{i-1}, X_i V_i
///   upsilon^1, upsilon^2 = mean of V_{i-1}, V_{i-1}^2
/// with i = 1..n, so V_0 enters the lagged sums and V_n is excluded from them.
struct MomentSummary {
    std::array<double, 6> xi{};
    std::array<double, 2> upsilon{};
    std::size_t n = 0;
};

MomentSummary sample_statistics(const ObservationSeries& series);

/// Why the closed-form solution exists (or not) on this sample. The first two
/// entries are the existence event for the closed form; gamma_n < 1,
/// eta_n > 0 and zeta_n > 0 are finite-sample guards so a reported estimate
/// always lies in the parameter space.
struct GateDiagnostics {
    double autocovariance = 0.0;  // xi^2 - xi^1 upsilon^1
    double variance = 0.0;        // upsilon^2 - (upsilon^1)^2
    double gamma_n = 0.0;
    std::vector<std::string> failures;

    bool passed() const { return failures.empty(); }
};

struct EstimateResult {
    std::optional<ModelParams> theta;  // engaged iff the gate passed
    GateDiagnostics gate;

    bool ok() const { return theta.has_value(); }

    /// (lambda, zeta, eta, mu, beta, rho), with the all-zeros convention for
    /// degenerate samples.
    std::array<double, 6> theta_or_zero() const;
};

/// Closed-form solution of the six estimating equations. Feeding the
/// theoretical limits of the statistics returns the generating theta exactly.
EstimateResult solve_estimating_equations(const MomentSummary& summary,
                                          double delta_t);

/// Full estimate with the requested named-parameter view.
struct Estimate {
    EstimateResult result;
    ModelKind kind = ModelKind::generic;
    std::optional<GammaOUParams> gamma_ou;
    std::optional<IGOUParams> ig_ou;
};

Estimate estimate(const ObservationSeries& series, ModelKind kind);

std::string estimate_to_json_text(const Estimate& est);

}  // namespace bns
