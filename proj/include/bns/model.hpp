#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace bns {

/// Generic parameter vector theta = (lambda, zeta, eta, mu, beta, rho) of a
/// BNS-type stochastic volatility model, together with the observation grid
/// width delta_t. All quantities are annualized: delta_t is measured in years
/// (1/250 for daily data).
struct ModelParams {
    double lambda = 0.0;   // mean-reversion rate of the variance process (1/time)
    double zeta = 0.0;     // stationary mean of the variance
    double eta = 0.0;      // stationary variance of the variance
    double mu = 0.0;       // return drift (1/time)
    double beta = 0.0;     // risk-premium coefficient
    double rho = 0.0;      // leverage coefficient on BDLP jumps
    double delta_t = 0.0;  // grid width (time)

    ModelParams() = default;
    ModelParams(double lambda_, double zeta_, double eta_, double mu_,
                double beta_, double rho_, double delta_t_);

    /// gamma = exp(-lambda * delta_t), the one-step AR coefficient of V.
    double gamma() const;
    /// epsilon = (1 - gamma) / lambda, the one-step integrated decay weight.
    double epsilon() const;

    void validate() const;
};

/// Gamma stationary law: V0 ~ Gamma(shape nu, rate alpha).
struct GammaOUParams {
    double nu = 0.0;
    double alpha = 0.0;

    void validate() const;
};

/// Inverse Gaussian stationary law: V0 ~ IG(delta_ig, gamma_ig).
struct IGOUParams {
    double delta_ig = 0.0;
    double gamma_ig = 0.0;

    void validate() const;
};

/// (zeta, eta) = (nu/alpha, nu/alpha^2) and its inverse.
std::pair<double, double> gamma_ou_to_generic(const GammaOUParams& p);
GammaOUParams generic_to_gamma_ou(double zeta, double eta);

/// (zeta, eta) = (delta/gamma, delta/gamma^3) and its inverse.
std::pair<double, double> ig_ou_to_generic(const IGOUParams& p);
IGOUParams generic_to_ig_ou(double zeta, double eta);

/// Cumulants K_1..K_max of the stationary variance law. The moment engine
/// consumes nothing else about the distribution.
class CumulantSpec {
public:
    CumulantSpec() = default;
    explicit CumulantSpec(std::vector<double> cumulants);

    /// K_n, 1-based. Throws std::domain_error naming the required order when
    /// n exceeds max_order().
    double K(int n) const;
    int max_order() const { return static_cast<int>(k_.size()); }
    const std::vector<double>& cumulants() const { return k_; }

private:
    std::vector<double> k_;
};

inline constexpr int kDefaultCumulantOrder = 10;

/// Gamma(nu, alpha): K_n = nu * (n-1)! / alpha^n.
CumulantSpec gamma_ou_cumulants(const GammaOUParams& p,
                                int max_order = kDefaultCumulantOrder);
/// IG(delta, gamma): K_n = delta * (2n-3)!! / gamma^(2n-1).
CumulantSpec ig_ou_cumulants(const IGOUParams& p,
                             int max_order = kDefaultCumulantOrder);
/// Only K_1 = zeta and K_2 = eta are known for an unnamed stationary law.
CumulantSpec generic_cumulants(double zeta, double eta);

enum class ModelKind { generic, gamma_ou, ig_ou };

std::string to_string(ModelKind kind);
ModelKind model_kind_from_string(const std::string& s);

/// A concrete model: generic parameters plus, for the named laws, the native
/// parametrization used for sampling and reporting.
struct Model {
    ModelKind kind = ModelKind::generic;
    ModelParams params;
    GammaOUParams gamma_ou;  // meaningful iff kind == gamma_ou
    IGOUParams ig_ou;        // meaningful iff kind == ig_ou

    CumulantSpec cumulants(int max_order = kDefaultCumulantOrder) const;
};

Model make_generic_model(const ModelParams& params);
Model make_gamma_ou_model(const GammaOUParams& ou, double lambda, double mu,
                          double beta, double rho, double delta_t);
Model make_ig_ou_model(const IGOUParams& ou, double lambda, double mu,
                       double beta, double rho, double delta_t);

/// Parses a model from the JSON parameter-file schema: {"model": "gamma_ou",
/// "nu":.., "alpha":.., "lambda":.., "mu":.., "beta":.., "rho":.., "delta_t":..}
/// with {"zeta","eta"} resp. {"delta_ig","gamma_ig"} for the other kinds.
/// Missing or invalid keys raise std::invalid_argument naming the key.
Model model_from_json_text(const std::string& text);
Model model_from_json_file(const std::string& path);
std::string model_to_json_text(const Model& model);

}  // namespace bns
