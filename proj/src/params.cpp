#include "clsaddle/params.hpp"

#include <cmath>
#include <numbers>

namespace clsaddle {

void ModelParams::validate() const {
    if (!(omega_r > 0.0)) throw ParamError("omega_r must be positive");
    if (!(omega_cut > 0.0)) throw ParamError("omega_cut must be positive");
    if (!(gamma >= 0.0)) throw ParamError("gamma must be nonnegative");
    if (!(beta > 0.0)) throw ParamError("beta must be positive");
    if (n_env < 0) throw ParamError("n_env must be nonnegative");
    if (n_env == 0 && gamma != 0.0)
        throw ParamError("n_env = 0 requires gamma = 0");
    if (sigma_sq_override && !(*sigma_sq_override > 0.0))
        throw ParamError("sigma_sq must be positive");
}

LatticeParams LatticeParams::make(double eps, int n_t, double beta,
                                  std::optional<double> eps_tilde_hint) {
    if (!(eps > 0.0)) throw ParamError("eps must be positive");
    if (n_t < 1) throw ParamError("n_t must be at least 1");
    if (!(beta > 0.0)) throw ParamError("beta must be positive");
    const double hint = eps_tilde_hint ? *eps_tilde_hint : default_eps_tilde(beta);
    if (!(hint > 0.0)) throw ParamError("eps_tilde must be positive");
    int n_beta = static_cast<int>(std::lround(beta / hint));
    if (n_beta < 1) n_beta = 1;
    return LatticeParams{eps, n_t, beta / n_beta, n_beta};
}

DerivedParams DerivedParams::from(const ModelParams& p) {
    p.validate();
    DerivedParams d;
    d.omega_b = bare_frequency(p.omega_r, p.gamma, p.omega_cut);
    if (p.n_env > 0) {
        d.coupling_c = coupling_from_gamma(p.gamma, p.omega_cut, p.n_env);
        d.omega_k = environment_frequencies(p.omega_cut, p.n_env);
    } else {
        d.coupling_c = 0.0;
    }
    return d;
}

std::vector<double> environment_frequencies(double omega_cut, int n_env) {
    if (!(omega_cut > 0.0)) throw ParamError("omega_cut must be positive");
    if (n_env < 1) throw ParamError("n_env must be at least 1");
    std::vector<double> w(n_env);
    for (int k = 1; k <= n_env; ++k)
        w[k - 1] = omega_cut * std::cbrt(static_cast<double>(k) / n_env);
    return w;
}

double coupling_from_gamma(double gamma, double omega_cut, int n_env) {
    if (!(gamma >= 0.0)) throw ParamError("gamma must be nonnegative");
    if (!(omega_cut > 0.0)) throw ParamError("omega_cut must be positive");
    if (n_env < 1) throw ParamError("n_env must be at least 1");
    double s = 0.0;
    for (int k = 1; k <= n_env; ++k)
        s += std::pow(static_cast<double>(n_env) / k, 2.0 / 3.0);
    return std::sqrt(4.0 * gamma / std::numbers::pi * omega_cut * omega_cut * omega_cut / s);
}

double bare_frequency(double omega_r, double gamma, double omega_cut) {
    return std::sqrt(omega_r * omega_r + 4.0 * gamma * omega_cut / std::numbers::pi);
}

double default_eps_tilde(double beta) {
    if (!(beta > 0.0)) throw ParamError("beta must be positive");
    return beta >= 0.2 ? 0.05 : beta / 4.0;
}

} // namespace clsaddle
