#pragma once

#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "clsaddle/assembly.hpp"
#include "clsaddle/solver.hpp"

namespace clsaddle {

// |rho_S| fall-off coefficients at one time point.
struct DecoherenceObservables {
    double t = 0.0;
    double j = 0.0;
    double k = 0.0;
    double gamma_diag = 0.0;     // 2 (J - K)
    double gamma_offdiag = 0.0;  // 2 (J + K)
    double gamma_tilde = 0.0;    // (beta / 8 gamma) {G_off(t) - 2 omega_r}
};

struct JK {
    double j;
    double k;
    // both algebraic routes, for the symmetry checks
    double j_alt;
    double k_alt;
};

// J = Re(c . M^{-1} c), K = Re(c . M^{-1} c~); the alternate routes through
// c~ must agree to 1e-9 relative or a NumericalError is thrown (an assembly
// bug breaks the symmetry of M before anything else).
JK compute_jk(const QuadraticForm& qf, const Factorization& fact);

// (Gamma_diag, Gamma_offdiag) = (2(J-K), 2(J+K)); warns on a nonpositive
// result, which signals an upstream failure.
std::pair<double, double> gammas(double j, double k);

// Rescaled growth of the off-diagonal width, using the analytic initial
// value Gamma_offdiag(0) = 2 omega_r. Throws ParamError for gamma = 0.
double gamma_tilde(double gamma_offdiag_t, double gamma, double beta, double omega_r);

// Master-equation reference curve 8 gamma t / beta.
double master_equation_reference(double gamma, double beta, double t);

enum class Normalization { Peak, Trace };

struct GridSpec {
    double half_width;  // grid covers [-half_width, half_width] in both axes
    int n;              // points per axis, >= 1
    Normalization norm = Normalization::Peak;
};

struct DensityGrid {
    std::vector<double> points;
    Eigen::MatrixXd abs_rho;  // abs_rho(i, j) = |rho(points[i], points[j])|
    Normalization norm = Normalization::Peak;
};

// |rho(x_F, xt_F)| = exp{-Gd/2 ((x+xt)/2)^2 - Go/2 ((x-xt)/2)^2}, the
// det^{-1/2} prefactor replaced by the chosen normalization.
DensityGrid density_grid(const QuadraticForm& qf, const Factorization& fact,
                         const GridSpec& spec);

} // namespace clsaddle
