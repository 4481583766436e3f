#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cmath>

#include "bns/moments.hpp"
#include "bns/rng.hpp"
#include "bns/simulate.hpp"
#include "test_support.hpp"

using namespace bns;
using testsupport::rel_err;

namespace {

// Closed forms of the six conditional-moment functions with delta_t carried
// explicitly; the engine must specialize to these exactly.
std::array<double, 6> f_closed_form(const ModelParams& p, double v) {
    const double g = p.gamma(), e = p.epsilon(), dt = p.delta_t;
    const double z = p.zeta, h = p.eta;
    const double c4 = p.mu * dt + p.beta * z * (dt - e) + p.rho * p.lambda * dt * z;
    std::array<double, 6> f{};
    f[0] = g * v + (1.0 - g) * z;
    f[1] = v * f[0];
    f[2] = g * g * v * v + 2.0 * g * (1.0 - g) * z * v +
           (1.0 - g) * (1.0 - g) * z * z + (1.0 - g * g) * h;
    f[3] = p.beta * e * v + c4;
    f[4] = v * f[3];
    f[5] = p.beta * e * g * v * v + (c4 * g + p.beta * e * (1.0 - g) * z) * v +
           (1.0 - g) * z * c4 + p.beta * e * (1.0 - g) * h +
           2.0 * p.rho * p.lambda * e * h;
    return f;
}

}  // namespace

TEST_CASE("stationary moments from cumulants") {
    const MomentEngine engine = testsupport::reference_engine();
    CHECK(engine.stationary_moment(0) == 1.0);
    CHECK(rel_err(engine.stationary_moment(1), 0.04) < 1e-14);
    CHECK(rel_err(engine.stationary_moment(2), 0.04 * 0.04 + 6.25e-4) < 1e-14);

    // Gamma raw moments nu(nu+1)...(nu+n-1)/alpha^n as an independent oracle.
    const double nu = 2.56, alpha = 64.0;
    double rising = 1.0;
    for (int n = 1; n <= 8; ++n) {
        rising *= (nu + n - 1) / alpha;
        CHECK(rel_err(engine.stationary_moment(n), rising) < 1e-12);
    }
    CHECK_THROWS_AS(engine.stationary_moment(11), std::domain_error);
}

TEST_CASE("IG stationary moments against the known raw-moment series") {
    // E[X^n] = (delta/gamma)^n sum_{k<n} (n-1+k)! / (k! (n-1-k)!) (2 delta gamma)^{-k}
    const IGOUParams ig{2.56, 8.0};
    const ModelParams params(256.0, 0.32, 0.005, 0.0, 0.0, 0.0, 0.004);
    const MomentEngine engine(params, ig_ou_cumulants(ig, 10));
    for (int n = 1; n <= 8; ++n) {
        double sum = 0.0;
        for (int k = 0; k <= n - 1; ++k) {
            double term = 1.0;
            for (int j = n - k; j <= n - 1 + k; ++j) term *= j;  // (n-1+k)!/(n-1-k)!
            double kfact = 1.0;
            for (int j = 2; j <= k; ++j) kfact *= j;
            sum += term / kfact * std::pow(2.0 * ig.delta_ig * ig.gamma_ig, -k);
        }
        const double oracle = std::pow(ig.delta_ig / ig.gamma_ig, n) * sum;
        CHECK(rel_err(engine.stationary_moment(n), oracle) < 1e-12);
    }
}

TEST_CASE("epsilon coefficients match adaptive quadrature") {
    const double lambdas[] = {50.0, 256.0, 500.0};
    const double dts[] = {1.0 / 250.0, 1.0 / 52.0, 1.0};
    for (double lambda : lambdas) {
        for (double dt : dts) {
            const ModelParams p(lambda, 0.04, 6.25e-4, 0.0, 0.0, 0.0, dt);
            const MomentEngine engine(p, generic_cumulants(0.04, 6.25e-4));
            for (int i = 0; i + 0 <= 6; ++i) {
                for (int j = 0; i + j <= 6; ++j) {
                    const double closed = engine.epsilon_coeff(i, j);
                    const double quad =
                        testsupport::epsilon_coeff_quadrature(i, j, lambda, dt);
                    CHECK(rel_err(closed, quad) < 1e-10);
                }
            }
        }
    }
}

TEST_CASE("epsilon coefficient closed-form spot values") {
    const MomentEngine engine = testsupport::reference_engine();
    const ModelParams& p = engine.params();
    CHECK(rel_err(engine.epsilon_coeff(0, 0), p.delta_t) < 1e-14);
    CHECK(rel_err(engine.epsilon_coeff(0, 1), p.epsilon()) < 1e-14);
    CHECK(rel_err(engine.epsilon_coeff(1, 0),
                  (p.delta_t - p.epsilon()) / p.lambda) < 1e-14);
    // eps_11 = epsilon^2 / 2, used by the covariance of (S1, U1).
    CHECK(rel_err(engine.epsilon_coeff(1, 1), 0.5 * p.epsilon() * p.epsilon()) < 1e-13);
}

TEST_CASE("trivariate cumulants") {
    const MomentEngine engine = testsupport::reference_engine();
    const ModelParams& p = engine.params();
    // mean of Z1 and mean of U1
    CHECK(rel_err(engine.trivariate_cumulant(0, 0, 1),
                  p.lambda * p.delta_t * p.zeta) < 1e-14);
    CHECK(rel_err(engine.trivariate_cumulant(0, 1, 0), (1.0 - p.gamma()) * p.zeta) <
          1e-14);
    // variance of U1
    CHECK(rel_err(engine.trivariate_cumulant(0, 2, 0),
                  (1.0 - p.gamma() * p.gamma()) * p.eta) < 1e-13);
    // pure-Z cumulants reduce to lambda*dt*l*K_l
    for (int l = 1; l <= 4; ++l) {
        CHECK(rel_err(engine.trivariate_cumulant(0, 0, l),
                      p.lambda * p.delta_t * l * engine.spec().K(l)) < 1e-14);
    }
    CHECK_THROWS_AS(engine.trivariate_cumulant(0, 0, 0), std::domain_error);
}

TEST_CASE("three moment recursions agree to 1e-10 up to total order 6") {
    const MomentEngine engines[] = {
        testsupport::reference_engine(),
        MomentEngine(ModelParams(50.0, 0.32, 0.005, 0.3, 1.0, 0.5, 1.0 / 52.0),
                     ig_ou_cumulants(IGOUParams{2.56, 8.0}, 10)),
    };
    for (const MomentEngine& engine : engines) {
        for (int n = 0; n <= 6; ++n) {
            for (int m = 0; n + m <= 6; ++m) {
                for (int l = 0; n + m + l <= 6; ++l) {
                    const double s = engine.trivariate_moment_via(
                        MomentEngine::DescentAxis::S, n, m, l);
                    const double u = engine.trivariate_moment_via(
                        MomentEngine::DescentAxis::U, n, m, l);
                    const double z = engine.trivariate_moment_via(
                        MomentEngine::DescentAxis::Z, n, m, l);
                    CHECK(rel_err(s, u) < 1e-10);
                    CHECK(rel_err(s, z) < 1e-10);
                    CHECK(rel_err(engine.trivariate_moment(n, m, l), s) < 1e-12);
                }
            }
        }
    }
}

TEST_CASE("trivariate moment base cases") {
    const MomentEngine engine = testsupport::reference_engine();
    const ModelParams& p = engine.params();
    CHECK(engine.trivariate_moment(0, 0, 0) == 1.0);
    CHECK(rel_err(engine.trivariate_moment(0, 1, 0), (1.0 - p.gamma()) * p.zeta) <
          1e-14);
    // E[S1 U1] = cov + mean*mean with cov = lambda eps^2 eta.
    const double eps = p.epsilon();
    const double want = p.lambda * eps * eps * p.eta +
                        p.zeta * (p.delta_t - eps) * (1.0 - p.gamma()) * p.zeta;
    CHECK(rel_err(engine.trivariate_moment(1, 1, 0), want) < 1e-13);
}

TEST_CASE("trivariate moments against Monte Carlo") {
    // Simulated (S1, U1) over one grid cell; 2e6 cells keeps this fast while
    // the 5-sigma band stays tight enough to catch sign or scale slips.
    const Model model = testsupport::reference_model();
    const MomentEngine engine = testsupport::reference_engine();
    Rng jump_rng(20240611, 1);
    Rng wiener_rng(20240611, 2);
    const std::size_t cells = 2'000'000;
    std::vector<double> su(cells), s1(cells), u1(cells);
    for (std::size_t i = 0; i < cells; ++i) {
        const OneStep step =
            simulate_one_step_gamma_ou(model, 0.0, jump_rng, wiener_rng);
        s1[i] = step.s1;
        u1[i] = step.u1;
        su[i] = step.s1 * step.u1;
    }
    const auto su_stats = testsupport::mean_se(su);
    CHECK(std::abs(su_stats.mean - engine.trivariate_moment(1, 1, 0)) <
          5.0 * su_stats.se);
    const auto s_stats = testsupport::mean_se(s1);
    CHECK(std::abs(s_stats.mean - engine.trivariate_moment(1, 0, 0)) <
          5.0 * s_stats.se);
    const auto u_stats = testsupport::mean_se(u1);
    CHECK(std::abs(u_stats.mean - engine.trivariate_moment(0, 1, 0)) <
          5.0 * u_stats.se);
}

TEST_CASE("phi coefficients specialize to the closed-form conditional moments") {
    const ModelParams points[] = {
        testsupport::reference_model().params,
        ModelParams(50.0, 0.01, 1e-4, -2.0, 2.0, -1.0, 1.0 / 250.0),
        ModelParams(500.0, 0.1, 5e-3, 2.0, -2.0, 1.0, 1.0 / 250.0),
        ModelParams(3.0, 0.5, 0.05, 0.7, 0.2, -0.4, 1.0),  // delta_t = 1 leg
    };
    for (const ModelParams& p : points) {
        const MomentEngine engine(p, generic_cumulants(p.zeta, p.eta));

        const Polynomial f1 = engine.phi_coeffs(0, 1);
        CHECK(rel_err(f1.coeff(1), p.gamma()) < 1e-13);
        CHECK(rel_err(f1.coeff(0), (1.0 - p.gamma()) * p.zeta) < 1e-13);

        const Polynomial f4 = engine.phi_coeffs(1, 0);
        const double c4 = p.mu * p.delta_t + p.beta * p.zeta * (p.delta_t - p.epsilon()) +
                          p.rho * p.lambda * p.delta_t * p.zeta;
        CHECK(rel_err(f4.coeff(1), p.beta * p.epsilon()) < 1e-13);
        CHECK(rel_err(f4.coeff(0), c4) < 1e-13);

        for (double v : {0.0, 0.5 * p.zeta, p.zeta, 5.0 * p.zeta}) {
            const auto engine_f = engine.f_vector(v);
            const auto closed_f = f_closed_form(p, v);
            for (int i = 0; i < 6; ++i) {
                CHECK(rel_err(engine_f[static_cast<std::size_t>(i)],
                              closed_f[static_cast<std::size_t>(i)]) < 1e-12);
            }
        }
    }
}

TEST_CASE("f-vector structural identities") {
    const MomentEngine engine = testsupport::reference_engine();
    const ModelParams& p = engine.params();
    CHECK(engine.phi_coeffs(0, 0).degree() == 0);
    CHECK(engine.phi_coeffs(0, 0).coeff(0) == 1.0);
    for (double v : {0.0, 0.02, 0.04, 0.2}) {
        const auto f = engine.f_vector(v);
        CHECK(rel_err(f[1], v * f[0]) < 1e-14);  // f2 = v f1
        CHECK(rel_err(f[4], v * f[3]) < 1e-14);  // f5 = v f4
    }
    const double g = p.gamma(), z = p.zeta, h = p.eta;
    CHECK(rel_err(engine.f_vector(0.0)[2],
                  (1.0 - g) * (1.0 - g) * z * z + (1.0 - g * g) * h) < 1e-13);
}

TEST_CASE("unconditional moments: known limits and the tower property") {
    const MomentEngine engine = testsupport::reference_engine();
    const ModelParams& p = engine.params();
    CHECK(rel_err(engine.unconditional_moment(0, 1), p.zeta) < 1e-13);
    CHECK(rel_err(engine.unconditional_moment(0, 2), p.zeta * p.zeta + p.eta) < 1e-13);

    // Tower property: contraction against stationary moments equals averaging
    // the conditional moment over simulated stationary draws.
    const Model model = testsupport::reference_model();
    Rng rng(77, 5);
    const std::size_t draws = 400'000;
    for (const auto& [n, m] : {std::pair{1, 1}, std::pair{2, 0}, std::pair{0, 2}}) {
        std::vector<double> cond(draws);
        for (std::size_t i = 0; i < draws; ++i) {
            cond[i] = engine.conditional_moment(n, m, draw_stationary_v0(model, rng));
        }
        const auto stats = testsupport::mean_se(cond);
        CHECK(std::abs(engine.unconditional_moment(n, m) - stats.mean) <
              5.0 * stats.se);
    }
}

TEST_CASE("insufficient cumulant order raises explicit errors") {
    const ModelParams p = testsupport::reference_model().params;
    const MomentEngine engine(p, generic_cumulants(p.zeta, p.eta));
    // Order-2 spec: one-step first moments are fine, fourth moments are not.
    CHECK_NOTHROW(engine.unconditional_moment(1, 1));
    CHECK_THROWS_WITH_AS(engine.unconditional_moment(2, 2),
                         doctest::Contains("order"), std::domain_error);
    CHECK_THROWS_AS(engine.trivariate_moment(2, 1, 0), std::domain_error);
    CHECK_THROWS_AS(engine.conditional_moment(0, 1, -1.0), std::domain_error);
}
