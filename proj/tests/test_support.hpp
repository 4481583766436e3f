#pragma once

// Shared oracles for the test suites. Everything here is independent of the
// library's computation paths: quadrature instead of closed forms, contour
// differentiation instead of cumulant formulas, textbook CDFs for
// goodness-of-fit.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <numbers>
#include <vector>

#include "bns/model.hpp"
#include "bns/moments.hpp"

namespace testsupport {

inline double rel_err(double got, double want) {
    const double scale = std::max(std::abs(got), std::abs(want));
    if (scale == 0.0) return 0.0;
    return std::abs(got - want) / scale;
}

// Adaptive Simpson quadrature with interval-doubling error control. The first
// `force` levels subdivide unconditionally so narrow boundary layers cannot
// hide between the initial sample points.
inline double adaptive_simpson_step(const std::function<double(double)>& f, double a,
                                    double b, double fa, double fm, double fb,
                                    double whole, double tol, int depth, int force) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || (force <= 0 && std::abs(delta) <= 15.0 * tol)) {
        return left + right + delta / 15.0;
    }
    return adaptive_simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1,
                                 force - 1) +
           adaptive_simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1,
                                 force - 1);
}

inline double adaptive_simpson(const std::function<double(double)>& f, double a,
                               double b, double tol = 1e-14, int force = 0) {
    const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return adaptive_simpson_step(f, a, b, fa, fm, fb, whole, tol, 48, force);
}

// Quadrature version of the epsilon_ij integral, the oracle for the closed
// form: int_0^dt ((1 - e^{-lambda u})/lambda)^i (e^{-lambda u})^j du.
inline double epsilon_coeff_quadrature(int i, int j, double lambda, double dt) {
    auto integrand = [=](double u) {
        return std::pow(-std::expm1(-lambda * u) / lambda, i) *
               std::exp(-static_cast<double>(j) * lambda * u);
    };
    // Magnitude anchor for the absolute tolerance: sample both uniformly and
    // geometrically towards 0, where the j > 0 integrand concentrates when
    // lambda*dt is large.
    double sup = 0.0;
    for (int k = 1; k <= 256; ++k) sup = std::max(sup, integrand(dt * k / 256.0));
    for (int k = 0; k <= 48; ++k) sup = std::max(sup, integrand(dt * std::pow(0.5, k)));
    const double width = std::min(dt, 1.0 / lambda);
    return adaptive_simpson(integrand, 0.0, dt, 1e-14 * std::max(sup * width, 1e-300),
                            12);
}

// n-th derivative of an analytic function at 0 by the Cauchy integral over a
// circle of the given radius, trapezoidal rule. Spectrally accurate; the
// independent route to stationary cumulants from a cumulant generating
// function.
template <typename Cgf>
double contour_derivative(Cgf&& cgf, int n, double radius, int points = 512) {
    std::complex<double> acc{0.0, 0.0};
    for (int j = 0; j < points; ++j) {
        const double theta = 2.0 * std::numbers::pi * j / points;
        const std::complex<double> z = std::polar(radius, theta);
        acc += cgf(z) * std::polar(1.0, -n * theta);
    }
    double factorial = 1.0;
    for (int k = 2; k <= n; ++k) factorial *= k;
    return factorial * acc.real() / (points * std::pow(radius, n));
}

// CGFs of the two stationary laws (log moment generating functions).
inline std::complex<double> gamma_cgf(std::complex<double> t, double nu, double alpha) {
    return -nu * std::log(1.0 - t / alpha);
}
inline std::complex<double> ig_cgf(std::complex<double> t, double delta, double gamma) {
    return delta * (gamma - std::sqrt(gamma * gamma - 2.0 * t));
}

inline double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

// IG(delta, gamma) distribution function in the mean/shape form
// (mean = delta/gamma, shape = delta^2).
inline double ig_cdf(double x, double delta, double gamma) {
    if (x <= 0.0) return 0.0;
    const double mean = delta / gamma;
    const double shape = delta * delta;
    const double root = std::sqrt(shape / x);
    const double a = normal_cdf(root * (x / mean - 1.0));
    const double b = std::exp(2.0 * shape / mean) * normal_cdf(-root * (x / mean + 1.0));
    return a + b;
}

// Kolmogorov-Smirnov statistic of a sample against a CDF.
inline double ks_statistic(std::vector<double> sample,
                           const std::function<double(double)>& cdf) {
    std::sort(sample.begin(), sample.end());
    const double n = static_cast<double>(sample.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sample.size(); ++i) {
        const double f = cdf(sample[i]);
        d = std::max(d, std::abs(f - static_cast<double>(i) / n));
        d = std::max(d, std::abs(static_cast<double>(i + 1) / n - f));
    }
    return d;
}

struct MeanSe {
    double mean = 0.0;
    double se = 0.0;
    double sd = 0.0;
};

inline MeanSe mean_se(const std::vector<double>& sample) {
    const double n = static_cast<double>(sample.size());
    MeanSe out;
    for (double v : sample) out.mean += v;
    out.mean /= n;
    double var = 0.0;
    for (double v : sample) {
        const double d = v - out.mean;
        var += d * d;
    }
    var /= (n - 1.0);
    out.sd = std::sqrt(var);
    out.se = out.sd / std::sqrt(n);
    return out;
}

// The numerical-illustration parameter point used throughout the tests:
// Gamma-OU with nu=2.56, alpha=64, lambda=256, mu=1.2, beta=-0.5, rho=-0.1 on
// a daily grid of a 250-day year.
inline bns::Model reference_model() {
    return bns::make_gamma_ou_model({2.56, 64.0}, 256.0, 1.2, -0.5, -0.1, 1.0 / 250.0);
}

inline bns::MomentEngine reference_engine() {
    const bns::Model model = reference_model();
    return bns::MomentEngine(model.params, model.cumulants());
}

// Deterministic parameter draws inside the estimation box used by the
// recovery and grid tests.
struct ThetaBox {
    std::uint64_t state;
    explicit ThetaBox(std::uint64_t seed) : state(seed) {}

    double next_uniform() {
        state = state * 6364136223846793005ULL + 1442695040888963407ULL;
        return static_cast<double>(state >> 11) * 0x1.0p-53;
    }
    double in(double lo, double hi) { return lo + (hi - lo) * next_uniform(); }

    bns::ModelParams draw(double delta_t = 1.0 / 250.0) {
        return bns::ModelParams(in(50.0, 500.0), in(0.01, 0.1), in(1e-4, 5e-3),
                                in(-2.0, 2.0), in(-2.0, 2.0), in(-1.0, 1.0), delta_t);
    }
};

}  // namespace testsupport
