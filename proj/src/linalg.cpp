#include "bns/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace bns {

Mat Mat::identity(std::size_t n) {
    Mat m(n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

Mat Mat::transpose() const {
    Mat out(n_);
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t j = 0; j < n_; ++j) out(j, i) = (*this)(i, j);
    return out;
}

Mat Mat::operator*(const Mat& other) const {
    if (n_ != other.n_) throw std::invalid_argument("matrix size mismatch");
    Mat out(n_);
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t k = 0; k < n_; ++k) {
            const double aik = (*this)(i, k);
            if (aik == 0.0) continue;
            for (std::size_t j = 0; j < n_; ++j) out(i, j) += aik * other(k, j);
        }
    return out;
}

Mat Mat::operator-(const Mat& other) const {
    if (n_ != other.n_) throw std::invalid_argument("matrix size mismatch");
    Mat out(n_);
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t j = 0; j < n_; ++j) out(i, j) = (*this)(i, j) - other(i, j);
    return out;
}

double Mat::max_abs() const {
    double m = 0.0;
    for (double v : a_) m = std::max(m, std::abs(v));
    return m;
}

namespace {

struct Lu {
    Mat lu;
    std::vector<std::size_t> perm;
    double sign = 1.0;
};

Lu lu_factor(const Mat& a) {
    const std::size_t n = a.size();
    Lu f{a, std::vector<std::size_t>(n), 1.0};
    for (std::size_t i = 0; i < n; ++i) f.perm[i] = i;
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        double best = std::abs(f.lu(col, col));
        for (std::size_t r = col + 1; r < n; ++r) {
            const double cand = std::abs(f.lu(r, col));
            if (cand > best) {
                best = cand;
                pivot = r;
            }
        }
        if (pivot != col) {
            for (std::size_t j = 0; j < n; ++j) std::swap(f.lu(col, j), f.lu(pivot, j));
            std::swap(f.perm[col], f.perm[pivot]);
            f.sign = -f.sign;
        }
        const double d = f.lu(col, col);
        if (d == 0.0) throw std::runtime_error("singular matrix in LU factorization");
        for (std::size_t r = col + 1; r < n; ++r) {
            const double factor = f.lu(r, col) / d;
            f.lu(r, col) = factor;
            for (std::size_t j = col + 1; j < n; ++j) f.lu(r, j) -= factor * f.lu(col, j);
        }
    }
    return f;
}

}  // namespace

Mat lu_solve(const Mat& a, const Mat& b) {
    if (a.size() != b.size()) throw std::invalid_argument("matrix size mismatch");
    const std::size_t n = a.size();
    const Lu f = lu_factor(a);
    Mat x(n);
    std::vector<double> col(n);
    for (std::size_t rhs = 0; rhs < n; ++rhs) {
        for (std::size_t i = 0; i < n; ++i) col[i] = b(f.perm[i], rhs);
        for (std::size_t i = 1; i < n; ++i)
            for (std::size_t j = 0; j < i; ++j) col[i] -= f.lu(i, j) * col[j];
        for (std::size_t i = n; i-- > 0;) {
            for (std::size_t j = i + 1; j < n; ++j) col[i] -= f.lu(i, j) * col[j];
            col[i] /= f.lu(i, i);
        }
        for (std::size_t i = 0; i < n; ++i) x(i, rhs) = col[i];
    }
    return x;
}

double determinant(const Mat& a) {
    Lu f = [&] {
        try {
            return lu_factor(a);
        } catch (const std::runtime_error&) {
            return Lu{Mat(a.size()), {}, 0.0};
        }
    }();
    if (f.sign == 0.0) return 0.0;
    double det = f.sign;
    for (std::size_t i = 0; i < a.size(); ++i) det *= f.lu(i, i);
    return det;
}

std::vector<double> symmetric_eigenvalues(const Mat& a) {
    const std::size_t n = a.size();
    Mat m = a;
    // Cyclic Jacobi sweeps; 6x6 inputs converge in a handful of sweeps.
    for (int sweep = 0; sweep < 64; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) off += m(p, q) * m(p, q);
        if (off < 1e-300) break;
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = m(p, q);
                if (apq == 0.0) continue;
                const double app = m(p, p), aqq = m(q, q);
                const double tau = (aqq - app) / (2.0 * apq);
                const double t = (tau >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const double mkp = m(k, p), mkq = m(k, q);
                    m(k, p) = c * mkp - s * mkq;
                    m(k, q) = s * mkp + c * mkq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double mpk = m(p, k), mqk = m(q, k);
                    m(p, k) = c * mpk - s * mqk;
                    m(q, k) = s * mpk + c * mqk;
                }
            }
        }
    }
    std::vector<double> eig(n);
    for (std::size_t i = 0; i < n; ++i) eig[i] = m(i, i);
    std::sort(eig.begin(), eig.end());
    return eig;
}

bool is_positive_semidefinite(const Mat& a, double tol) {
    double trace = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) trace += a(i, i);
    const auto eig = symmetric_eigenvalues(a);
    return eig.front() >= -tol * std::abs(trace);
}

Mat sandwich(const Mat& m, const Mat& a) { return m * a * m.transpose(); }

}  // namespace bns
