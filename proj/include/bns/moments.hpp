#pragma once

#include <array>
#include <vector>

#include "bns/model.hpp"
#include "bns/polynomial.hpp"

namespace bns {

/// Joint moment machinery for one-step observations of a BNS-type model.
///
/// Everything is driven by the stationary cumulants K_n and the one-step
/// constants gamma = e^{-lambda*dt}, epsilon = (1-gamma)/lambda. The chain is
///
///   epsilon_coeff  ->  cumulants of (S1, U1, Z1)  ->  moments of (S1, U1, Z1)
///                  ->  conditional moment polynomials in V0
///                  ->  unconditional moments against stationary moments of V0.
///
/// All tables are precomputed in the constructor, so a const engine is safe
/// for unrestricted concurrent reads.
class MomentEngine {
public:
    MomentEngine(const ModelParams& params, CumulantSpec spec);

    const ModelParams& params() const { return params_; }
    const CumulantSpec& spec() const { return spec_; }
    double gamma() const { return gamma_; }
    double epsilon() const { return epsilon_; }

    /// E[V0^n] from the cumulant-to-moment recursion; exact, no truncation.
    double stationary_moment(int n) const;

    /// Closed form of int_0^dt [(1-e^{-lambda(dt-s)})/lambda]^i e^{-j lambda(dt-s)} ds.
    double epsilon_coeff(int i, int j) const;

    /// Joint cumulant of S1^n U1^m Z1^l: lambda * eps_{nm} * (n+m+l) * K_{n+m+l}.
    double trivariate_cumulant(int n, int m, int l) const;

    /// E[S1^n U1^m Z1^l], by the moment-from-cumulant recursion descending in
    /// the first positive index (S, then U, then Z).
    double trivariate_moment(int n, int m, int l) const;

    /// Which index the moment recursion descends in; used to cross-check that
    /// all three recursions agree.
    enum class DescentAxis { S, U, Z };

    /// Recomputes E[S1^n U1^m Z1^l] preferring the given descent axis, with
    /// its own scratch table. Intended for consistency checks.
    double trivariate_moment_via(DescentAxis axis, int n, int m, int l) const;

    /// Coefficients of E[Y1^n V1^m Z1^l | V0 = v] as a polynomial in v
    /// (degree n+m, the Z power adds no v dependence).
    Polynomial xi_coeffs(int n, int m, int l) const;

    /// Coefficients of E[A1^n Y1^m V1^l | V0 = v], A1 = mu*dt + beta*Y1 + rho*Z1.
    Polynomial psi_coeffs(int n, int m, int l) const;

    /// Coefficients of E[X1^n V1^m | V0 = v] (degree n+m).
    Polynomial phi_coeffs(int n, int m) const;

    double conditional_moment(int n, int m, double v) const;

    /// E[X1^n V1^m] = sum_k phi_{nmk} E[V0^k].
    double unconditional_moment(int n, int m) const;

    /// E[X1^n V1^m V0^r] = sum_k phi_{nmk} E[V0^{k+r}].
    double unconditional_moment_v0(int n, int m, int r) const;

    /// (f^1..f^6)(v): conditional expectations of
    /// (V1, V1 V0, V1^2, X1, X1 V0, X1 V1) given V0 = v.
    std::array<double, 6> f_vector(double v) const;

    /// The same six functions as polynomials in v.
    std::array<Polynomial, 6> f_polynomials() const;

    int max_trivariate_order() const { return max_tri_order_; }

private:
    double trivariate_moment_axis(DescentAxis axis, int n, int m, int l,
                                  std::vector<double>& memo) const;
    std::size_t tri_index(int n, int m, int l) const;

    ModelParams params_;
    CumulantSpec spec_;
    double gamma_ = 0.0;
    double epsilon_ = 0.0;
    int max_tri_order_ = 0;
    std::vector<double> stationary_moments_;  // index n
    std::vector<double> tri_moments_;         // cube over (n, m, l)
};

/// C(n, k) as a double; exact for the small orders used here.
double binomial(int n, int k);

/// (2i-1)!! = (2i)!/(2^i i!), the even moments of a standard normal.
double double_factorial_odd(int i);

}  // namespace bns
