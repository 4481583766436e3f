#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace bns {

/// Polynomial in the conditioning variance v, stored dense from the constant
/// term up. Conditional moments E[X1^n V1^m | V0 = v] live here; structural
/// trailing zeros are kept so the coefficient slots match the defining sums.
class Polynomial {
public:
    Polynomial() : c_(1, 0.0) {}
    explicit Polynomial(std::vector<double> coeffs) : c_(std::move(coeffs)) {
        if (c_.empty()) c_.assign(1, 0.0);
    }
    static Polynomial zeros(int degree) {
        return Polynomial(std::vector<double>(static_cast<std::size_t>(degree) + 1, 0.0));
    }

    int degree() const { return static_cast<int>(c_.size()) - 1; }
    double coeff(int k) const {
        return (k >= 0 && k <= degree()) ? c_[static_cast<std::size_t>(k)] : 0.0;
    }
    double& operator[](int k) { return c_.at(static_cast<std::size_t>(k)); }
    const std::vector<double>& coeffs() const { return c_; }

    double operator()(double v) const {
        double acc = 0.0;
        for (std::size_t k = c_.size(); k-- > 0;) acc = acc * v + c_[k];
        return acc;
    }

    /// v * p(v): coefficients shifted up one slot.
    Polynomial shifted_up() const {
        std::vector<double> out(c_.size() + 1, 0.0);
        for (std::size_t k = 0; k < c_.size(); ++k) out[k + 1] = c_[k];
        return Polynomial(std::move(out));
    }

    Polynomial operator*(const Polynomial& other) const {
        std::vector<double> out(c_.size() + other.c_.size() - 1, 0.0);
        for (std::size_t i = 0; i < c_.size(); ++i)
            for (std::size_t j = 0; j < other.c_.size(); ++j)
                out[i + j] += c_[i] * other.c_[j];
        return Polynomial(std::move(out));
    }

    Polynomial operator+(const Polynomial& other) const {
        std::vector<double> out(std::max(c_.size(), other.c_.size()), 0.0);
        for (std::size_t k = 0; k < out.size(); ++k) {
            if (k < c_.size()) out[k] += c_[k];
            if (k < other.c_.size()) out[k] += other.c_[k];
        }
        return Polynomial(std::move(out));
    }

    /// sum_k c_k * weights[k]; weights must extend at least to degree().
    double contract(std::span<const double> weights) const {
        if (weights.size() < c_.size()) {
            throw std::domain_error("contraction weights shorter than polynomial");
        }
        double acc = 0.0;
        for (std::size_t k = 0; k < c_.size(); ++k) acc += c_[k] * weights[k];
        return acc;
    }

private:
    std::vector<double> c_;
};

}  // namespace bns
