#pragma once

#include <array>
#include <string>
#include <vector>

#include "bns/linalg.hpp"
#include "bns/moments.hpp"

namespace bns {

/// Limits of the eight sample statistics, computed from the moment engine.
struct TheoreticalMoments {
    std::array<double, 6> xi{};
    std::array<double, 2> upsilon{};
};

TheoreticalMoments theoretical_xi(const MomentEngine& engine);

/// The same limits from the closed-form display; kept as a cross-check of the
/// engine route.
TheoreticalMoments theoretical_xi_reference(const ModelParams& params);

/// Upsilon_ij = E[Cov(Xi_1^i, Xi_1^j | V0)] for
/// Xi_1 = (V1, V1 V0, V1^2, X1, X1 V0, X1 V1).
Mat upsilon_matrix(const MomentEngine& engine);

/// P_ij = delta_ij - phi^i_1 delta_1j - phi^i_2 delta_3j, built from the v and
/// v^2 coefficients of the conditional-moment polynomials f^i.
Mat p_matrix(const MomentEngine& engine);

/// Sigma = P^{-1} Upsilon P^{-T}, via pivoted solves.
Mat sigma_matrix(const MomentEngine& engine);

/// Jacobian of the solution map h(xi) (upsilon eliminated through upsilon^1 =
/// xi^1, upsilon^2 = xi^3) at the theoretical xi, by central differences with
/// per-coordinate relative step. Row order (lambda, zeta, eta, mu, beta, rho).
Mat jacobian_solution_map(const MomentEngine& engine);

/// det P = (1-gamma)^2 (1+gamma) and det D = lambda / (2 (1-gamma)^2 gamma eta^3),
/// the structural identities the matrices are checked against.
double p_determinant_identity(const ModelParams& params);
double d_determinant_identity(const ModelParams& params);

struct AsymptoticReport {
    ModelKind parametrization = ModelKind::generic;
    std::array<std::string, 6> labels{};
    Mat upsilon, p, sigma, jacobian, t;
    std::array<double, 6> s{};  // sqrt of diag(T); estimator sd is s/sqrt(n)
    Mat r;                      // correlation matrix of T
    bool upsilon_psd = false, sigma_psd = false, t_psd = false;
};

/// Full pipeline T = D Sigma D^T. For the named parametrizations an extra
/// delta-method factor maps (lambda, zeta, eta, mu, beta, rho) to
/// (nu, alpha, lambda, mu, beta, rho) resp. (delta_ig, gamma_ig, lambda, mu,
/// beta, rho).
AsymptoticReport asymptotic_covariance(const MomentEngine& engine,
                                       ModelKind parametrization);

std::string report_to_json_text(const AsymptoticReport& report);

/// Comparison of replicated estimates against the asymptotic law.
struct EmpiricalComparison {
    std::array<double, 6> mc_sd_scaled{};  // sd(estimates) * sqrt(n)
    std::array<double, 6> ratio{};         // mc_sd_scaled / s
    std::array<double, 6> skewness{};
    std::array<double, 6> excess_kurtosis{};
    std::size_t replications = 0;
};

EmpiricalComparison empirical_vs_asymptotic(
    const std::vector<std::array<double, 6>>& estimates,
    const AsymptoticReport& report, std::size_t n_per_replication);

}  // namespace bns
