#include "bns/estimator.hpp"

#include <cmath>
#include <stdexcept>

#include <json.hpp>

namespace bns {

MomentSummary sample_statistics(const ObservationSeries& series) {
    series.validate();
    const std::size_t n = series.size();
    if (n < 2) {
        throw std::invalid_argument("at least 2 observations required, got " +
                                    std::to_string(n));
    }
    MomentSummary s;
    s.n = n;
    double v_prev = series.v0;
    for (std::size_t i = 0; i < n; ++i) {
        const double vi = series.v[i];
        const double xi = series.x[i];
        s.xi[0] += vi;
        s.xi[1] += vi * v_prev;
        s.xi[2] += vi * vi;
        s.xi[3] += xi;
        s.xi[4] += xi * v_prev;
        s.xi[5] += xi * vi;
        s.upsilon[0] += v_prev;
        s.upsilon[1] += v_prev * v_prev;
        v_prev = vi;
    }
    const double inv_n = 1.0 / static_cast<double>(n);
    for (auto& value : s.xi) value *= inv_n;
    for (auto& value : s.upsilon) value *= inv_n;
    return s;
}

std::array<double, 6> EstimateResult::theta_or_zero() const {
    if (!theta) return {0.0, 0.0, 0.0, 0.0, 0.0, 0.0};
    return {theta->lambda, theta->zeta, theta->eta, theta->mu, theta->beta, theta->rho};
}

EstimateResult solve_estimating_equations(const MomentSummary& summary,
                                          double delta_t) {
    if (!(delta_t > 0.0)) throw std::invalid_argument("delta_t must be positive");
    if (summary.n < 2) throw std::invalid_argument("at least 2 observations required");

    const auto& xi = summary.xi;
    const auto& up = summary.upsilon;

    EstimateResult result;
    auto& gate = result.gate;
    gate.autocovariance = xi[1] - xi[0] * up[0];
    gate.variance = up[1] - up[0] * up[0];

    if (gate.variance > 0.0) {
        gate.gamma_n = gate.autocovariance / gate.variance;
    }
    if (!(gate.autocovariance > 0.0)) {
        gate.failures.push_back("autocovariance nonpositive");
    }
    if (!(gate.variance > 0.0)) {
        gate.failures.push_back("lagged variance nonpositive");
    }
    if (!gate.failures.empty()) return result;

    const double gamma_n = gate.gamma_n;
    if (!(gamma_n < 1.0)) {
        gate.failures.push_back("gamma estimate not below 1");
        return result;
    }

    const double zeta_n = (xi[0] - gamma_n * up[0]) / (1.0 - gamma_n);
    const double eta_n = ((xi[2] - xi[0] * xi[0]) - gamma_n * gamma_n * gate.variance) /
                         (1.0 - gamma_n * gamma_n);
    if (!(eta_n > 0.0)) {
        gate.failures.push_back("eta estimate nonpositive");
    }
    if (!(zeta_n > 0.0)) {
        gate.failures.push_back("zeta estimate nonpositive");
    }
    if (!gate.failures.empty()) return result;

    const double lambda_n = -std::log(gamma_n) / delta_t;
    const double eps_n = (1.0 - gamma_n) / lambda_n;
    const double beta_n = (xi[4] - up[0] * xi[3]) / (eps_n * gate.variance);
    const double rho_n =
        (xi[5] - xi[3] * xi[0] -
         beta_n * eps_n * (eta_n * (1.0 - gamma_n) + gamma_n * gate.variance)) /
        (2.0 * (1.0 - gamma_n) * eta_n);
    const double mu_n = (xi[3] - beta_n * eps_n * (up[0] - zeta_n)) / delta_t -
                        (beta_n + lambda_n * rho_n) * zeta_n;

    result.theta = ModelParams(lambda_n, zeta_n, eta_n, mu_n, beta_n, rho_n, delta_t);
    return result;
}

Estimate estimate(const ObservationSeries& series, ModelKind kind) {
    Estimate est;
    est.kind = kind;
    est.result = solve_estimating_equations(sample_statistics(series), series.delta_t);
    if (est.result.ok()) {
        const ModelParams& theta = *est.result.theta;
        switch (kind) {
            case ModelKind::gamma_ou:
                est.gamma_ou = generic_to_gamma_ou(theta.zeta, theta.eta);
                break;
            case ModelKind::ig_ou:
                est.ig_ou = generic_to_ig_ou(theta.zeta, theta.eta);
                break;
            case ModelKind::generic:
                break;
        }
    }
    return est;
}

std::string estimate_to_json_text(const Estimate& est) {
    nlohmann::json j;
    j["status"] = est.result.ok() ? "ok" : "degenerate";
    j["model"] = to_string(est.kind);
    if (est.result.ok()) {
        const ModelParams& t = *est.result.theta;
        j["theta_hat"] = {{"lambda", t.lambda}, {"zeta", t.zeta},   {"eta", t.eta},
                          {"mu", t.mu},         {"beta", t.beta},   {"rho", t.rho},
                          {"delta_t", t.delta_t}};
        if (est.gamma_ou) {
            j["named_params"] = {{"nu", est.gamma_ou->nu}, {"alpha", est.gamma_ou->alpha}};
        } else if (est.ig_ou) {
            j["named_params"] = {{"delta_ig", est.ig_ou->delta_ig},
                                 {"gamma_ig", est.ig_ou->gamma_ig}};
        }
    }
    j["gate_diagnostics"] = {{"autocovariance", est.result.gate.autocovariance},
                             {"variance", est.result.gate.variance},
                             {"gamma_n", est.result.gate.gamma_n},
                             {"failures", est.result.gate.failures}};
    return j.dump(2);
}

}  // namespace bns
