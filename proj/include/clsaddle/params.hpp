#pragma once

#include <optional>
#include <vector>

#include "clsaddle/errors.hpp"

namespace clsaddle {

// Physical inputs. The renormalized frequency omega_r is the knob; the bare
// frequency and the microscopic coupling are derived (see DerivedParams).
struct ModelParams {
    double omega_r = 0.08;   // renormalized system frequency, > 0
    double omega_cut = 2.0;  // environment frequency cutoff, > 0
    double gamma = 0.1;      // effective coupling, >= 0
    double beta = 0.05;      // inverse temperature, > 0
    int n_env = 64;          // environment oscillator count, >= 0
    std::optional<double> sigma_sq_override;  // initial wave-packet variance

    // Defaults to the ground state of the renormalized oscillator.
    double sigma_sq() const {
        return sigma_sq_override ? *sigma_sq_override : 1.0 / (2.0 * omega_r);
    }

    void validate() const;  // throws ParamError
};

// Real-time and Euclidean lattice. eps_tilde is always beta / n_beta exactly,
// so the thermal leg closes at beta regardless of the requested step.
struct LatticeParams {
    double eps;        // real-time step
    int n_t;           // real-time step count, >= 1
    double eps_tilde;  // Euclidean step
    int n_beta;        // Euclidean step count, >= 1

    double t_final() const { return n_t * eps; }

    static LatticeParams make(double eps, int n_t, double beta,
                              std::optional<double> eps_tilde_hint = {});
};

// Constants derived from ModelParams.
struct DerivedParams {
    double omega_b;               // bare system frequency
    double coupling_c;            // microscopic coupling constant
    std::vector<double> omega_k;  // environment frequencies, ascending

    static DerivedParams from(const ModelParams& p);
};

// omega_k = omega_cut * (k / n_env)^(1/3), k = 1..n_env.
std::vector<double> environment_frequencies(double omega_cut, int n_env);

// c = sqrt( (4 gamma / pi) omega_cut^3 / sum_k (n_env/k)^(2/3) ), c >= 0.
double coupling_from_gamma(double gamma, double omega_cut, int n_env);

// omega_b = sqrt(omega_r^2 + 4 gamma omega_cut / pi).
double bare_frequency(double omega_r, double gamma, double omega_cut);

// Step-size rule for the thermal leg: 0.05 for beta >= 0.2, beta/4 below.
double default_eps_tilde(double beta);

} // namespace clsaddle
