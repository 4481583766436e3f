#pragma once

#include <cstddef>
#include <vector>

namespace bns {

/// Small dense square matrix, row major. Sized for the 6x6 blocks of the
/// asymptotic covariance pipeline; no external solver needed at this scale.
class Mat {
public:
    Mat() = default;
    explicit Mat(std::size_t n) : n_(n), a_(n * n, 0.0) {}

    static Mat identity(std::size_t n);

    std::size_t size() const { return n_; }
    double& operator()(std::size_t i, std::size_t j) { return a_[i * n_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return a_[i * n_ + j]; }

    Mat transpose() const;
    Mat operator*(const Mat& other) const;
    Mat operator-(const Mat& other) const;

    double max_abs() const;

private:
    std::size_t n_ = 0;
    std::vector<double> a_;
};

/// Solves A X = B by LU with partial pivoting. Throws std::runtime_error on a
/// numerically singular pivot.
Mat lu_solve(const Mat& a, const Mat& b);

/// Determinant via the same LU factorization.
double determinant(const Mat& a);

/// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations, ascending.
std::vector<double> symmetric_eigenvalues(const Mat& a);

/// min eigenvalue >= -tol * trace, the PSD check used for covariance blocks.
bool is_positive_semidefinite(const Mat& a, double tol = 1e-8);

/// Congruence transform M A M^T.
Mat sandwich(const Mat& m, const Mat& a);

}  // namespace bns
