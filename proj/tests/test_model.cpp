#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "bns/model.hpp"
#include "test_support.hpp"

using namespace bns;
using testsupport::rel_err;

TEST_CASE("parameter validation rejects non-positive scale parameters") {
    CHECK_THROWS_AS(ModelParams(0.0, 0.04, 1e-4, 0.0, 0.0, 0.0, 0.004),
                    std::invalid_argument);
    CHECK_THROWS_AS(ModelParams(256.0, -0.04, 1e-4, 0.0, 0.0, 0.0, 0.004),
                    std::invalid_argument);
    CHECK_THROWS_AS(ModelParams(256.0, 0.04, 0.0, 0.0, 0.0, 0.0, 0.004),
                    std::invalid_argument);
    CHECK_THROWS_AS(ModelParams(256.0, 0.04, 1e-4, 0.0, 0.0, 0.0, 0.0),
                    std::invalid_argument);
    CHECK_THROWS_AS((GammaOUParams{-1.0, 64.0}).validate(), std::invalid_argument);
    CHECK_THROWS_AS((IGOUParams{1.0, 0.0}).validate(), std::invalid_argument);
}

TEST_CASE("derived constants") {
    const ModelParams p(256.0, 0.04, 6.25e-4, 1.2, -0.5, -0.1, 1.0 / 250.0);
    CHECK(rel_err(p.gamma(), std::exp(-1.024)) < 1e-15);
    CHECK(p.gamma() == doctest::Approx(0.35914).epsilon(1e-4));

    // epsilon -> delta_t as lambda -> 0, and always sits inside (0, delta_t).
    const ModelParams tiny(1e-9, 0.04, 6.25e-4, 0.0, 0.0, 0.0, 0.004);
    CHECK(tiny.epsilon() == doctest::Approx(0.004).epsilon(1e-9));

    testsupport::ThetaBox box(11);
    for (int i = 0; i < 200; ++i) {
        const ModelParams q = box.draw();
        CHECK(q.gamma() > 0.0);
        CHECK(q.gamma() < 1.0);
        CHECK(q.epsilon() > 0.0);
        CHECK(q.epsilon() < q.delta_t);
    }
}

TEST_CASE("gamma-OU parametrization map and roundtrip") {
    const GammaOUParams ou{2.56, 64.0};
    const auto [zeta, eta] = gamma_ou_to_generic(ou);
    CHECK(zeta == doctest::Approx(0.04).epsilon(1e-14));
    CHECK(eta == doctest::Approx(6.25e-4).epsilon(1e-14));

    testsupport::ThetaBox box(22);
    for (int i = 0; i < 200; ++i) {
        const GammaOUParams p{box.in(1e-3, 1e3), box.in(1e-3, 1e3)};
        const auto [z, e] = gamma_ou_to_generic(p);
        const GammaOUParams back = generic_to_gamma_ou(z, e);
        CHECK(rel_err(back.nu, p.nu) < 1e-12);
        CHECK(rel_err(back.alpha, p.alpha) < 1e-12);
    }
    CHECK_THROWS_AS(generic_to_gamma_ou(-1.0, 1.0), std::invalid_argument);
}

TEST_CASE("IG-OU parametrization map and roundtrip") {
    CHECK(ig_ou_to_generic(IGOUParams{1.0, 1.0}) == std::pair{1.0, 1.0});
    const auto [zeta, eta] = ig_ou_to_generic(IGOUParams{2.56, 8.0});
    CHECK(zeta == doctest::Approx(0.32).epsilon(1e-14));
    CHECK(eta == doctest::Approx(0.005).epsilon(1e-14));

    testsupport::ThetaBox box(33);
    for (int i = 0; i < 200; ++i) {
        const IGOUParams p{box.in(1e-3, 1e3), box.in(1e-3, 1e3)};
        const auto [z, e] = ig_ou_to_generic(p);
        const IGOUParams back = generic_to_ig_ou(z, e);
        CHECK(rel_err(back.delta_ig, p.delta_ig) < 1e-12);
        CHECK(rel_err(back.gamma_ig, p.gamma_ig) < 1e-12);
    }
}

TEST_CASE("stationary cumulants against the contour-differentiation oracle") {
    const GammaOUParams gamma_p{2.56, 64.0};
    const CumulantSpec gamma_spec = gamma_ou_cumulants(gamma_p, 10);
    CHECK(gamma_spec.K(1) == doctest::Approx(0.04).epsilon(1e-14));
    CHECK(gamma_spec.K(2) == doctest::Approx(6.25e-4).epsilon(1e-14));
    CHECK(rel_err(gamma_spec.K(3), 2.0 * 2.56 / std::pow(64.0, 3)) < 1e-14);
    for (int n = 1; n <= 10; ++n) {
        const double oracle = testsupport::contour_derivative(
            [&](std::complex<double> t) {
                return testsupport::gamma_cgf(t, gamma_p.nu, gamma_p.alpha);
            },
            n, 0.6 * gamma_p.alpha);
        CHECK(rel_err(gamma_spec.K(n), oracle) < 1e-9);
    }

    const IGOUParams ig_p{2.56, 8.0};
    const CumulantSpec ig_spec = ig_ou_cumulants(ig_p, 10);
    CHECK(ig_spec.K(2) == doctest::Approx(2.56 / 512.0).epsilon(1e-14));
    for (int n = 1; n <= 10; ++n) {
        const double oracle = testsupport::contour_derivative(
            [&](std::complex<double> t) {
                return testsupport::ig_cgf(t, ig_p.delta_ig, ig_p.gamma_ig);
            },
            n, 0.3 * ig_p.gamma_ig * ig_p.gamma_ig);
        CHECK(rel_err(ig_spec.K(n), oracle) < 1e-9);
    }
}

TEST_CASE("cumulant spec positivity and consistency with the maps") {
    const Model model = testsupport::reference_model();
    const CumulantSpec spec = model.cumulants();
    for (int n = 1; n <= spec.max_order(); ++n) CHECK(spec.K(n) > 0.0);
    CHECK(rel_err(spec.K(1), model.params.zeta) < 1e-14);
    CHECK(rel_err(spec.K(2), model.params.eta) < 1e-14);

    CHECK_THROWS_AS(spec.K(11), std::domain_error);
    CHECK_THROWS_AS(gamma_ou_cumulants(GammaOUParams{2.56, 64.0}, 0),
                    std::invalid_argument);
}

TEST_CASE("model JSON parsing") {
    const std::string text = R"({"model":"gamma_ou","nu":2.56,"alpha":64,
        "lambda":256,"mu":1.2,"beta":-0.5,"rho":-0.1,"delta_t":0.004})";
    const Model m = model_from_json_text(text);
    CHECK(m.kind == ModelKind::gamma_ou);
    CHECK(m.params.zeta == doctest::Approx(0.04));
    CHECK(m.params.lambda == 256.0);

    // roundtrip through the writer
    const Model again = model_from_json_text(model_to_json_text(m));
    CHECK(again.gamma_ou.nu == m.gamma_ou.nu);
    CHECK(again.params.delta_t == m.params.delta_t);

    CHECK_THROWS_WITH_AS(
        model_from_json_text(R"({"model":"gamma_ou","nu":2.56,"lambda":256,
            "mu":1.2,"beta":-0.5,"rho":-0.1,"delta_t":0.004})"),
        doctest::Contains("alpha"), std::invalid_argument);
    CHECK_THROWS_AS(model_from_json_text("not json"), std::invalid_argument);
    CHECK_THROWS_AS(model_from_json_text(R"({"model":"heston"})"),
                    std::invalid_argument);
}
