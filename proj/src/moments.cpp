#include "bns/moments.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace bns {

namespace {

constexpr int kMaxOrderHardCap = 16;

// Pascal triangle in exact integers; plenty for the orders used here.
struct BinomialTable {
    double c[kMaxOrderHardCap + 1][kMaxOrderHardCap + 1] = {};
    BinomialTable() {
        for (int n = 0; n <= kMaxOrderHardCap; ++n) {
            unsigned long long row = 1;
            for (int k = 0; k <= n; ++k) {
                c[n][k] = static_cast<double>(row);
                row = row * static_cast<unsigned long long>(n - k) /
                      static_cast<unsigned long long>(k + 1);
            }
        }
    }
};

const BinomialTable kBinomial;

double int_pow(double base, int exp) {
    double acc = 1.0;
    for (int i = 0; i < exp; ++i) acc *= base;
    return acc;
}

}  // namespace

double binomial(int n, int k) {
    if (k < 0 || n < 0 || k > n) return 0.0;
    if (n > kMaxOrderHardCap) {
        throw std::domain_error("binomial order above supported cap");
    }
    return kBinomial.c[n][k];
}

double double_factorial_odd(int i) {
    double acc = 1.0;
    for (int j = 1; j <= i; ++j) acc *= 2 * j - 1;
    return acc;
}

MomentEngine::MomentEngine(const ModelParams& params, CumulantSpec spec)
    : params_(params), spec_(std::move(spec)) {
    params_.validate();
    gamma_ = params_.gamma();
    epsilon_ = params_.epsilon();

    const int order = spec_.max_order();
    max_tri_order_ = std::min(order, 12);

    stationary_moments_.assign(static_cast<std::size_t>(order) + 1, 0.0);
    stationary_moments_[0] = 1.0;
    for (int n = 1; n <= order; ++n) {
        double acc = 0.0;
        for (int i = 0; i <= n - 1; ++i) {
            acc += binomial(n - 1, i) * spec_.K(i + 1) *
                   stationary_moments_[static_cast<std::size_t>(n - 1 - i)];
        }
        stationary_moments_[static_cast<std::size_t>(n)] = acc;
    }

    const std::size_t side = static_cast<std::size_t>(max_tri_order_) + 1;
    tri_moments_.assign(side * side * side,
                        std::numeric_limits<double>::quiet_NaN());
    tri_moments_[tri_index(0, 0, 0)] = 1.0;
    for (int total = 1; total <= max_tri_order_; ++total) {
        for (int n = 0; n <= total; ++n) {
            for (int m = 0; m + n <= total; ++m) {
                const int l = total - n - m;
                tri_moments_[tri_index(n, m, l)] =
                    trivariate_moment_axis(DescentAxis::S, n, m, l, tri_moments_);
            }
        }
    }
}

std::size_t MomentEngine::tri_index(int n, int m, int l) const {
    const std::size_t side = static_cast<std::size_t>(max_tri_order_) + 1;
    return (static_cast<std::size_t>(n) * side + static_cast<std::size_t>(m)) * side +
           static_cast<std::size_t>(l);
}

double MomentEngine::stationary_moment(int n) const {
    if (n < 0) throw std::domain_error("stationary moment order must be >= 0");
    if (n >= static_cast<int>(stationary_moments_.size())) {
        throw std::domain_error("stationary cumulant of order " + std::to_string(n) +
                                " required, but only " +
                                std::to_string(spec_.max_order()) + " available");
    }
    return stationary_moments_[static_cast<std::size_t>(n)];
}

double MomentEngine::epsilon_coeff(int i, int j) const {
    if (i < 0 || j < 0) throw std::domain_error("epsilon_coeff needs i, j >= 0");
    // Binomial expansion of ((1 - e^{-lambda u})/lambda)^i e^{-j lambda u}
    // integrated over u in [0, dt]:
    //   lambda^{-i} sum_k C(i,k) (-1)^k I(j+k),
    // with I(0) = dt and I(p) = (1 - gamma^p)/(p lambda). The alternating sum
    // cancels about (lambda dt)^{-i}-fold for small lambda*dt, so it is
    // accumulated in extended precision.
    const long double lambda = params_.lambda;
    const long double dt = params_.delta_t;
    long double acc = 0.0L;
    long double sign = 1.0L;
    for (int k = 0; k <= i; ++k) {
        const int p = j + k;
        const long double integral =
            (p == 0) ? dt : -std::expm1(-static_cast<long double>(p) * lambda * dt) /
                                (static_cast<long double>(p) * lambda);
        acc += sign * static_cast<long double>(binomial(i, k)) * integral;
        sign = -sign;
    }
    long double scale = 1.0L;
    for (int k = 0; k < i; ++k) scale *= lambda;
    return static_cast<double>(acc / scale);
}

double MomentEngine::trivariate_cumulant(int n, int m, int l) const {
    if (n < 0 || m < 0 || l < 0 || n + m + l < 1) {
        throw std::domain_error("trivariate cumulant needs total order >= 1");
    }
    const int total = n + m + l;
    return params_.lambda * epsilon_coeff(n, m) * static_cast<double>(total) *
           spec_.K(total);
}

double MomentEngine::trivariate_moment(int n, int m, int l) const {
    if (n < 0 || m < 0 || l < 0) {
        throw std::domain_error("trivariate moment orders must be >= 0");
    }
    if (n + m + l > max_tri_order_) {
        throw std::domain_error("stationary cumulant of order " +
                                std::to_string(n + m + l) + " required, but only " +
                                std::to_string(spec_.max_order()) + " available");
    }
    return tri_moments_[tri_index(n, m, l)];
}

double MomentEngine::trivariate_moment_axis(DescentAxis axis, int n, int m, int l,
                                            std::vector<double>& memo) const {
    if (n + m + l == 0) return 1.0;
    // Pick the requested descent axis when its index is positive, otherwise
    // fall back in S, U, Z order.
    DescentAxis use = axis;
    if (use == DescentAxis::S && n == 0) use = (m > 0) ? DescentAxis::U : DescentAxis::Z;
    if (use == DescentAxis::U && m == 0) use = (n > 0) ? DescentAxis::S : DescentAxis::Z;
    if (use == DescentAxis::Z && l == 0) use = (n > 0) ? DescentAxis::S : DescentAxis::U;

    auto lower = [&memo, this](int a, int b, int c) { return memo[tri_index(a, b, c)]; };

    double acc = 0.0;
    switch (use) {
        case DescentAxis::S:
            for (int i = 0; i <= n - 1; ++i)
                for (int j = 0; j <= m; ++j)
                    for (int k = 0; k <= l; ++k)
                        acc += binomial(n - 1, i) * binomial(m, j) * binomial(l, k) *
                               trivariate_cumulant(i + 1, j, k) *
                               lower(n - 1 - i, m - j, l - k);
            break;
        case DescentAxis::U:
            for (int i = 0; i <= n; ++i)
                for (int j = 0; j <= m - 1; ++j)
                    for (int k = 0; k <= l; ++k)
                        acc += binomial(n, i) * binomial(m - 1, j) * binomial(l, k) *
                               trivariate_cumulant(i, j + 1, k) *
                               lower(n - i, m - 1 - j, l - k);
            break;
        case DescentAxis::Z:
            for (int i = 0; i <= n; ++i)
                for (int j = 0; j <= m; ++j)
                    for (int k = 0; k <= l - 1; ++k)
                        acc += binomial(n, i) * binomial(m, j) * binomial(l - 1, k) *
                               trivariate_cumulant(i, j, k + 1) *
                               lower(n - i, m - j, l - 1 - k);
            break;
    }
    return acc;
}

double MomentEngine::trivariate_moment_via(DescentAxis axis, int n, int m, int l) const {
    if (n + m + l > max_tri_order_) {
        throw std::domain_error("stationary cumulant of order " +
                                std::to_string(n + m + l) + " required, but only " +
                                std::to_string(spec_.max_order()) + " available");
    }
    const std::size_t side = static_cast<std::size_t>(max_tri_order_) + 1;
    std::vector<double> memo(side * side * side,
                             std::numeric_limits<double>::quiet_NaN());
    memo[tri_index(0, 0, 0)] = 1.0;
    for (int total = 1; total <= n + m + l; ++total) {
        for (int a = 0; a <= total; ++a) {
            for (int b = 0; a + b <= total; ++b) {
                const int c = total - a - b;
                memo[tri_index(a, b, c)] = trivariate_moment_axis(axis, a, b, c, memo);
            }
        }
    }
    return memo[tri_index(n, m, l)];
}

Polynomial MomentEngine::xi_coeffs(int n, int m, int l) const {
    if (n < 0 || m < 0 || l < 0) {
        throw std::domain_error("xi_coeffs orders must be >= 0");
    }
    Polynomial out = Polynomial::zeros(n + m);
    for (int k = 0; k <= n + m; ++k) {
        double acc = 0.0;
        for (int j = std::max(0, k - n); j <= std::min(m, k); ++j) {
            acc += binomial(n, k - j) * binomial(m, j) * int_pow(epsilon_, k - j) *
                   int_pow(gamma_, j) * trivariate_moment(n - k + j, m - j, l);
        }
        out[k] = acc;
    }
    return out;
}

Polynomial MomentEngine::psi_coeffs(int n, int m, int l) const {
    if (n < 0 || m < 0 || l < 0) {
        throw std::domain_error("psi_coeffs orders must be >= 0");
    }
    // A1 = mu dt + beta Y1 + rho Z1, expanded by the trinomial theorem; the
    // drift enters through mu*dt, never bare mu.
    const double mu_dt = params_.mu * params_.delta_t;
    Polynomial out = Polynomial::zeros(n + m + l);
    for (int i = 0; i <= n; ++i) {
        for (int j = 0; j <= n - i; ++j) {
            const double weight = binomial(n, i) * binomial(n - i, j) *
                                  int_pow(params_.beta, i) * int_pow(params_.rho, j) *
                                  int_pow(mu_dt, n - i - j);
            if (weight == 0.0) continue;
            const Polynomial xi = xi_coeffs(m + i, l, j);
            for (int k = 0; k <= xi.degree(); ++k) out[k] += weight * xi.coeff(k);
        }
    }
    return out;
}

Polynomial MomentEngine::phi_coeffs(int n, int m) const {
    if (n < 0 || m < 0) {
        throw std::domain_error("phi_coeffs orders must be >= 0");
    }
    // Gaussian integration over W1: only even powers survive, weighted by
    // (2i)!/(2^i i!).
    Polynomial out = Polynomial::zeros(n + m);
    for (int i = 0; 2 * i <= n; ++i) {
        const double weight = binomial(n, 2 * i) * double_factorial_odd(i);
        const Polynomial psi = psi_coeffs(n - 2 * i, i, m);
        for (int k = 0; k <= std::min(psi.degree(), n + m); ++k) {
            out[k] += weight * psi.coeff(k);
        }
    }
    return out;
}

double MomentEngine::conditional_moment(int n, int m, double v) const {
    if (v < 0.0) throw std::domain_error("conditional moment needs v >= 0");
    return phi_coeffs(n, m)(v);
}

double MomentEngine::unconditional_moment(int n, int m) const {
    return unconditional_moment_v0(n, m, 0);
}

double MomentEngine::unconditional_moment_v0(int n, int m, int r) const {
    if (r < 0) throw std::domain_error("V0 power must be >= 0");
    const Polynomial phi = phi_coeffs(n, m);
    double acc = 0.0;
    for (int k = 0; k <= phi.degree(); ++k) {
        acc += phi.coeff(k) * stationary_moment(k + r);
    }
    return acc;
}

std::array<double, 6> MomentEngine::f_vector(double v) const {
    const auto f = f_polynomials();
    std::array<double, 6> out{};
    for (std::size_t i = 0; i < 6; ++i) out[i] = f[i](v);
    return out;
}

std::array<Polynomial, 6> MomentEngine::f_polynomials() const {
    const Polynomial f1 = phi_coeffs(0, 1);
    const Polynomial f4 = phi_coeffs(1, 0);
    return {f1, f1.shifted_up(), phi_coeffs(0, 2), f4, f4.shifted_up(),
            phi_coeffs(1, 1)};
}

}  // namespace bns
