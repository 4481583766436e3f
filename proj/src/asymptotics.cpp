#include "bns/asymptotics.hpp"

#include <cmath>
#include <stdexcept>

#include <json.hpp>

#include "bns/estimator.hpp"

namespace bns {

namespace {

// X, V1 and V0 exponents of the components of Xi_1.
struct XiExponents {
    int a, b, c;
};
constexpr XiExponents kXi[6] = {{0, 1, 0}, {0, 1, 1}, {0, 2, 0},
                                {1, 0, 0}, {1, 0, 1}, {1, 1, 0}};

// Solution map h(xi) with upsilon eliminated through its limits
// upsilon^1 = xi^1, upsilon^2 = xi^3.
std::array<double, 6> solution_map(const std::array<double, 6>& xi, double delta_t) {
    MomentSummary summary;
    summary.xi = xi;
    summary.upsilon = {xi[0], xi[2]};
    summary.n = 2;
    const EstimateResult res = solve_estimating_equations(summary, delta_t);
    if (!res.ok()) {
        std::string reasons;
        for (const auto& f : res.gate.failures) reasons += (reasons.empty() ? "" : "; ") + f;
        throw std::runtime_error("solution map undefined at perturbed point: " + reasons);
    }
    return res.theta_or_zero();
}

}  // namespace

TheoreticalMoments theoretical_xi(const MomentEngine& engine) {
    TheoreticalMoments tm;
    tm.xi[0] = engine.unconditional_moment(0, 1);
    tm.xi[1] = engine.unconditional_moment_v0(0, 1, 1);
    tm.xi[2] = engine.unconditional_moment(0, 2);
    tm.xi[3] = engine.unconditional_moment(1, 0);
    tm.xi[4] = engine.unconditional_moment_v0(1, 0, 1);
    tm.xi[5] = engine.unconditional_moment(1, 1);
    tm.upsilon[0] = engine.stationary_moment(1);
    tm.upsilon[1] = engine.stationary_moment(2);
    return tm;
}

TheoreticalMoments theoretical_xi_reference(const ModelParams& params) {
    params.validate();
    const double gamma = params.gamma();
    const double eps = params.epsilon();
    const double z = params.zeta, e = params.eta, dt = params.delta_t;
    const double drift = params.mu + (params.beta + params.lambda * params.rho) * z;
    TheoreticalMoments tm;
    tm.xi[0] = z;
    tm.xi[1] = z * z + gamma * e;
    tm.xi[2] = z * z + e;
    tm.xi[3] = dt * drift;
    tm.xi[4] = dt * drift * z + params.beta * eps * e;
    tm.xi[5] = dt * drift * z + (params.beta + 2.0 * params.rho * params.lambda) * eps * e;
    tm.upsilon[0] = z;
    tm.upsilon[1] = z * z + e;
    return tm;
}

Mat upsilon_matrix(const MomentEngine& engine) {
    const auto f = engine.f_polynomials();
    Mat u(6);
    for (std::size_t i = 0; i < 6; ++i) {
        for (std::size_t j = i; j < 6; ++j) {
            const double cross = engine.unconditional_moment_v0(
                kXi[i].a + kXi[j].a, kXi[i].b + kXi[j].b, kXi[i].c + kXi[j].c);
            const Polynomial prod = f[i] * f[j];
            double cond = 0.0;
            for (int k = 0; k <= prod.degree(); ++k) {
                cond += prod.coeff(k) * engine.stationary_moment(k);
            }
            u(i, j) = cross - cond;
            u(j, i) = u(i, j);
        }
    }
    return u;
}

Mat p_matrix(const MomentEngine& engine) {
    const auto f = engine.f_polynomials();
    Mat p = Mat::identity(6);
    for (std::size_t i = 0; i < 6; ++i) {
        p(i, 0) -= f[i].coeff(1);
        p(i, 2) -= f[i].coeff(2);
    }
    return p;
}

Mat sigma_matrix(const MomentEngine& engine) {
    const Mat u = upsilon_matrix(engine);
    const Mat p = p_matrix(engine);
    const Mat p_inv_u = lu_solve(p, u);
    Mat sigma = lu_solve(p, p_inv_u.transpose()).transpose();
    // P^{-1} U P^{-T} is symmetric up to roundoff; make it exactly so.
    for (std::size_t i = 0; i < 6; ++i) {
        for (std::size_t j = i + 1; j < 6; ++j) {
            const double s = 0.5 * (sigma(i, j) + sigma(j, i));
            sigma(i, j) = s;
            sigma(j, i) = s;
        }
    }
    return sigma;
}

Mat jacobian_solution_map(const MomentEngine& engine) {
    const double dt = engine.params().delta_t;
    const TheoreticalMoments tm = theoretical_xi(engine);
    Mat d(6);
    for (std::size_t j = 0; j < 6; ++j) {
        double rel = 1e-6;
        for (int attempt = 0;; ++attempt) {
            const double step = rel * (std::abs(tm.xi[j]) + 1e-12);
            auto lo = tm.xi, hi = tm.xi;
            lo[j] -= step;
            hi[j] += step;
            try {
                const auto f_lo = solution_map(lo, dt);
                const auto f_hi = solution_map(hi, dt);
                for (std::size_t i = 0; i < 6; ++i) {
                    d(i, j) = (f_hi[i] - f_lo[i]) / (2.0 * step);
                }
                break;
            } catch (const std::runtime_error&) {
                if (attempt >= 1) throw;
                rel = 1e-7;  // one shrink, then give up
            }
        }
    }
    return d;
}

double p_determinant_identity(const ModelParams& params) {
    const double gamma = params.gamma();
    return (1.0 - gamma) * (1.0 - gamma) * (1.0 + gamma);
}

double d_determinant_identity(const ModelParams& params) {
    // Block-triangular in ((lambda,zeta,eta), (mu,beta,rho)):
    // det D = det dA * det dB = 1/(gamma dt eta) * lambda/(2 dt (1-gamma)^2 eta^2).
    const double gamma = params.gamma();
    const double one_minus = 1.0 - gamma;
    const double dt2 = params.delta_t * params.delta_t;
    return params.lambda / (2.0 * one_minus * one_minus * gamma * params.eta *
                            params.eta * params.eta * dt2);
}

namespace {

Mat reparametrization_chain(const ModelParams& params, ModelKind kind) {
    Mat m = Mat::identity(6);
    const double z = params.zeta, e = params.eta;
    switch (kind) {
        case ModelKind::generic:
            return m;
        case ModelKind::gamma_ou:
            // (lambda, zeta, eta, ...) -> (nu, alpha, lambda, mu, beta, rho),
            // nu = zeta^2/eta, alpha = zeta/eta.
            m = Mat(6);
            m(0, 1) = 2.0 * z / e;
            m(0, 2) = -z * z / (e * e);
            m(1, 1) = 1.0 / e;
            m(1, 2) = -z / (e * e);
            m(2, 0) = 1.0;
            m(3, 3) = 1.0;
            m(4, 4) = 1.0;
            m(5, 5) = 1.0;
            return m;
        case ModelKind::ig_ou: {
            // delta = zeta^{3/2}/eta^{1/2}, gamma_ig = (zeta/eta)^{1/2}.
            m = Mat(6);
            const double root = std::sqrt(z / e);
            m(0, 1) = 1.5 * root;
            m(0, 2) = -0.5 * z * root / e;
            m(1, 1) = 0.5 * root / z;
            m(1, 2) = -0.5 * root / e;
            m(2, 0) = 1.0;
            m(3, 3) = 1.0;
            m(4, 4) = 1.0;
            m(5, 5) = 1.0;
            return m;
        }
    }
    return m;
}

std::array<std::string, 6> parametrization_labels(ModelKind kind) {
    switch (kind) {
        case ModelKind::gamma_ou:
            return {"nu", "alpha", "lambda", "mu", "beta", "rho"};
        case ModelKind::ig_ou:
            return {"delta_ig", "gamma_ig", "lambda", "mu", "beta", "rho"};
        case ModelKind::generic:
            break;
    }
    return {"lambda", "zeta", "eta", "mu", "beta", "rho"};
}

}  // namespace

AsymptoticReport asymptotic_covariance(const MomentEngine& engine,
                                       ModelKind parametrization) {
    AsymptoticReport rep;
    rep.parametrization = parametrization;
    rep.labels = parametrization_labels(parametrization);
    rep.upsilon = upsilon_matrix(engine);
    rep.p = p_matrix(engine);
    rep.sigma = sigma_matrix(engine);
    rep.jacobian = jacobian_solution_map(engine);

    Mat chain = reparametrization_chain(engine.params(), parametrization);
    rep.t = sandwich(chain * rep.jacobian, rep.sigma);
    for (std::size_t i = 0; i < 6; ++i) {
        for (std::size_t j = i + 1; j < 6; ++j) {
            const double t = 0.5 * (rep.t(i, j) + rep.t(j, i));
            rep.t(i, j) = t;
            rep.t(j, i) = t;
        }
    }

    rep.r = Mat(6);
    for (std::size_t i = 0; i < 6; ++i) {
        rep.s[i] = std::sqrt(std::max(rep.t(i, i), 0.0));
    }
    for (std::size_t i = 0; i < 6; ++i) {
        for (std::size_t j = 0; j < 6; ++j) {
            rep.r(i, j) = (i == j) ? 1.0 : rep.t(i, j) / (rep.s[i] * rep.s[j]);
        }
    }
    rep.upsilon_psd = is_positive_semidefinite(rep.upsilon);
    rep.sigma_psd = is_positive_semidefinite(rep.sigma);
    rep.t_psd = is_positive_semidefinite(rep.t);
    return rep;
}

namespace {

nlohmann::json mat_to_json(const Mat& m) {
    nlohmann::json rows = nlohmann::json::array();
    for (std::size_t i = 0; i < m.size(); ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (std::size_t j = 0; j < m.size(); ++j) row.push_back(m(i, j));
        rows.push_back(row);
    }
    return rows;
}

}  // namespace

std::string report_to_json_text(const AsymptoticReport& report) {
    nlohmann::json j;
    j["parametrization"] = to_string(report.parametrization);
    j["order"] = report.labels;
    j["upsilon"] = mat_to_json(report.upsilon);
    j["p_matrix"] = mat_to_json(report.p);
    j["sigma"] = mat_to_json(report.sigma);
    j["jacobian"] = mat_to_json(report.jacobian);
    j["t_matrix"] = mat_to_json(report.t);
    j["s"] = report.s;
    j["r"] = mat_to_json(report.r);
    j["psd"] = {{"upsilon", report.upsilon_psd},
                {"sigma", report.sigma_psd},
                {"t", report.t_psd}};
    return j.dump(2);
}

EmpiricalComparison empirical_vs_asymptotic(
    const std::vector<std::array<double, 6>>& estimates,
    const AsymptoticReport& report, std::size_t n_per_replication) {
    if (estimates.size() < 100) {
        throw std::invalid_argument("at least 100 replications required, got " +
                                    std::to_string(estimates.size()));
    }
    const double m = static_cast<double>(estimates.size());
    EmpiricalComparison cmp;
    cmp.replications = estimates.size();
    for (std::size_t p = 0; p < 6; ++p) {
        double mean = 0.0;
        for (const auto& est : estimates) mean += est[p];
        mean /= m;
        double m2 = 0.0, m3 = 0.0, m4 = 0.0;
        for (const auto& est : estimates) {
            const double d = est[p] - mean;
            m2 += d * d;
            m3 += d * d * d;
            m4 += d * d * d * d;
        }
        m2 /= m;
        m3 /= m;
        m4 /= m;
        const double sd = std::sqrt(m2);
        cmp.mc_sd_scaled[p] = sd * std::sqrt(static_cast<double>(n_per_replication));
        cmp.ratio[p] = cmp.mc_sd_scaled[p] / report.s[p];
        cmp.skewness[p] = m3 / (m2 * sd);
        cmp.excess_kurtosis[p] = m4 / (m2 * m2) - 3.0;
    }
    return cmp;
}

}  // namespace bns
