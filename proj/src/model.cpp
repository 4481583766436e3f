#include "bns/model.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace bns {

namespace {

void require_positive(double value, const char* name) {
    if (!(value > 0.0) || !std::isfinite(value)) {
        throw std::invalid_argument(std::string(name) + " must be positive and finite");
    }
}

void require_finite(double value, const char* name) {
    if (!std::isfinite(value)) {
        throw std::invalid_argument(std::string(name) + " must be finite");
    }
}

}  // namespace

ModelParams::ModelParams(double lambda_, double zeta_, double eta_, double mu_,
                         double beta_, double rho_, double delta_t_)
    : lambda(lambda_), zeta(zeta_), eta(eta_), mu(mu_), beta(beta_), rho(rho_),
      delta_t(delta_t_) {
    validate();
}

void ModelParams::validate() const {
    require_positive(lambda, "lambda");
    require_positive(zeta, "zeta");
    require_positive(eta, "eta");
    require_positive(delta_t, "delta_t");
    require_finite(mu, "mu");
    require_finite(beta, "beta");
    require_finite(rho, "rho");
}

double ModelParams::gamma() const { return std::exp(-lambda * delta_t); }

double ModelParams::epsilon() const {
    // (1 - e^{-lambda dt}) / lambda via expm1 to keep accuracy for small
    // lambda*dt; tends to dt as lambda -> 0.
    return -std::expm1(-lambda * delta_t) / lambda;
}

void GammaOUParams::validate() const {
    require_positive(nu, "nu");
    require_positive(alpha, "alpha");
}

void IGOUParams::validate() const {
    require_positive(delta_ig, "delta_ig");
    require_positive(gamma_ig, "gamma_ig");
}

std::pair<double, double> gamma_ou_to_generic(const GammaOUParams& p) {
    p.validate();
    return {p.nu / p.alpha, p.nu / (p.alpha * p.alpha)};
}

GammaOUParams generic_to_gamma_ou(double zeta, double eta) {
    require_positive(zeta, "zeta");
    require_positive(eta, "eta");
    return GammaOUParams{zeta * zeta / eta, zeta / eta};
}

std::pair<double, double> ig_ou_to_generic(const IGOUParams& p) {
    p.validate();
    const double zeta = p.delta_ig / p.gamma_ig;
    return {zeta, zeta / (p.gamma_ig * p.gamma_ig)};
}

IGOUParams generic_to_ig_ou(double zeta, double eta) {
    require_positive(zeta, "zeta");
    require_positive(eta, "eta");
    const double gamma_ig = std::sqrt(zeta / eta);
    return IGOUParams{zeta * gamma_ig, gamma_ig};
}

CumulantSpec::CumulantSpec(std::vector<double> cumulants) : k_(std::move(cumulants)) {
    if (k_.size() < 2) {
        throw std::invalid_argument("CumulantSpec needs at least K_1 and K_2");
    }
    if (!(k_[0] > 0.0) || !(k_[1] > 0.0)) {
        throw std::invalid_argument("K_1 and K_2 must be positive");
    }
    for (double k : k_) {
        if (!std::isfinite(k)) {
            throw std::invalid_argument("cumulants must be finite");
        }
    }
}

double CumulantSpec::K(int n) const {
    if (n < 1) {
        throw std::domain_error("cumulant order must be >= 1");
    }
    if (n > max_order()) {
        throw std::domain_error("stationary cumulant of order " + std::to_string(n) +
                                " required, but only " + std::to_string(max_order()) +
                                " available");
    }
    return k_[static_cast<std::size_t>(n - 1)];
}

CumulantSpec gamma_ou_cumulants(const GammaOUParams& p, int max_order) {
    p.validate();
    if (max_order < 2) {
        throw std::invalid_argument("max_order must be >= 2");
    }
    std::vector<double> k(static_cast<std::size_t>(max_order));
    // K_n = nu (n-1)! / alpha^n.
    double factorial = 1.0;
    double alpha_pow = p.alpha;
    for (int n = 1; n <= max_order; ++n) {
        k[static_cast<std::size_t>(n - 1)] = p.nu * factorial / alpha_pow;
        factorial *= n;
        alpha_pow *= p.alpha;
    }
    return CumulantSpec(std::move(k));
}

CumulantSpec ig_ou_cumulants(const IGOUParams& p, int max_order) {
    p.validate();
    if (max_order < 2) {
        throw std::invalid_argument("max_order must be >= 2");
    }
    std::vector<double> k(static_cast<std::size_t>(max_order));
    // K_n = delta (2n-3)!! / gamma^{2n-1}; (−1)!! = 1.
    double dfact = 1.0;
    double gamma_pow = p.gamma_ig;
    for (int n = 1; n <= max_order; ++n) {
        k[static_cast<std::size_t>(n - 1)] = p.delta_ig * dfact / gamma_pow;
        dfact *= 2 * n - 1;
        gamma_pow *= p.gamma_ig * p.gamma_ig;
    }
    return CumulantSpec(std::move(k));
}

CumulantSpec generic_cumulants(double zeta, double eta) {
    return CumulantSpec({zeta, eta});
}

std::string to_string(ModelKind kind) {
    switch (kind) {
        case ModelKind::generic: return "generic";
        case ModelKind::gamma_ou: return "gamma_ou";
        case ModelKind::ig_ou: return "ig_ou";
    }
    return "generic";
}

ModelKind model_kind_from_string(const std::string& s) {
    if (s == "generic") return ModelKind::generic;
    if (s == "gamma_ou") return ModelKind::gamma_ou;
    if (s == "ig_ou") return ModelKind::ig_ou;
    throw std::invalid_argument("unknown model kind '" + s +
                                "' (expected generic, gamma_ou or ig_ou)");
}

CumulantSpec Model::cumulants(int max_order) const {
    switch (kind) {
        case ModelKind::gamma_ou: return gamma_ou_cumulants(gamma_ou, max_order);
        case ModelKind::ig_ou: return ig_ou_cumulants(ig_ou, max_order);
        case ModelKind::generic: return generic_cumulants(params.zeta, params.eta);
    }
    return generic_cumulants(params.zeta, params.eta);
}

Model make_generic_model(const ModelParams& params) {
    params.validate();
    Model m;
    m.kind = ModelKind::generic;
    m.params = params;
    return m;
}

Model make_gamma_ou_model(const GammaOUParams& ou, double lambda, double mu,
                          double beta, double rho, double delta_t) {
    const auto [zeta, eta] = gamma_ou_to_generic(ou);
    Model m;
    m.kind = ModelKind::gamma_ou;
    m.params = ModelParams(lambda, zeta, eta, mu, beta, rho, delta_t);
    m.gamma_ou = ou;
    return m;
}

Model make_ig_ou_model(const IGOUParams& ou, double lambda, double mu,
                       double beta, double rho, double delta_t) {
    const auto [zeta, eta] = ig_ou_to_generic(ou);
    Model m;
    m.kind = ModelKind::ig_ou;
    m.params = ModelParams(lambda, zeta, eta, mu, beta, rho, delta_t);
    m.ig_ou = ou;
    return m;
}

namespace {

double get_number(const nlohmann::json& j, const char* key) {
    if (!j.contains(key)) {
        throw std::invalid_argument(std::string("missing key '") + key + "'");
    }
    if (!j[key].is_number()) {
        throw std::invalid_argument(std::string("key '") + key + "' must be a number");
    }
    return j[key].get<double>();
}

}  // namespace

Model model_from_json_text(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::invalid_argument(std::string("invalid JSON: ") + e.what());
    }
    if (!j.contains("model") || !j["model"].is_string()) {
        throw std::invalid_argument("missing key 'model'");
    }
    const ModelKind kind = model_kind_from_string(j["model"].get<std::string>());
    const double lambda = get_number(j, "lambda");
    const double mu = get_number(j, "mu");
    const double beta = get_number(j, "beta");
    const double rho = get_number(j, "rho");
    const double delta_t = get_number(j, "delta_t");
    switch (kind) {
        case ModelKind::gamma_ou:
            return make_gamma_ou_model(
                GammaOUParams{get_number(j, "nu"), get_number(j, "alpha")}, lambda, mu,
                beta, rho, delta_t);
        case ModelKind::ig_ou:
            return make_ig_ou_model(
                IGOUParams{get_number(j, "delta_ig"), get_number(j, "gamma_ig")}, lambda,
                mu, beta, rho, delta_t);
        case ModelKind::generic:
            return make_generic_model(ModelParams(lambda, get_number(j, "zeta"),
                                                  get_number(j, "eta"), mu, beta, rho,
                                                  delta_t));
    }
    throw std::invalid_argument("unknown model kind");
}

Model model_from_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::invalid_argument("cannot open parameter file '" + path + "'");
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return model_from_json_text(buffer.str());
}

std::string model_to_json_text(const Model& model) {
    nlohmann::json j;
    j["model"] = to_string(model.kind);
    j["lambda"] = model.params.lambda;
    j["mu"] = model.params.mu;
    j["beta"] = model.params.beta;
    j["rho"] = model.params.rho;
    j["delta_t"] = model.params.delta_t;
    switch (model.kind) {
        case ModelKind::gamma_ou:
            j["nu"] = model.gamma_ou.nu;
            j["alpha"] = model.gamma_ou.alpha;
            break;
        case ModelKind::ig_ou:
            j["delta_ig"] = model.ig_ou.delta_ig;
            j["gamma_ig"] = model.ig_ou.gamma_ig;
            break;
        case ModelKind::generic:
            j["zeta"] = model.params.zeta;
            j["eta"] = model.params.eta;
            break;
    }
    return j.dump(2);
}

}  // namespace bns
