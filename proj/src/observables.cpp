#include "clsaddle/observables.hpp"

#include <cmath>
#include <iostream>
#include <string>

namespace clsaddle {

JK compute_jk(const QuadraticForm& qf, const Factorization& fact) {
    const Eigen::VectorXcd u = fact.solve(qf.c_vec.cast<Complex>());
    const Eigen::VectorXcd v = fact.solve(qf.c_tilde_vec.cast<Complex>());

    // c and c~ are real, so Eigen's conjugating dot() is the plain bilinear form
    JK r;
    r.j = qf.c_vec.cast<Complex>().dot(u).real();
    r.k = qf.c_vec.cast<Complex>().dot(v).real();
    r.j_alt = qf.c_tilde_vec.cast<Complex>().dot(v).real();
    r.k_alt = qf.c_tilde_vec.cast<Complex>().dot(u).real();

    if (!(std::abs(r.j - r.j_alt) <= 1e-9 * (1.0 + std::abs(r.j))) ||
        !(std::abs(r.k - r.k_alt) <= 1e-9 * (1.0 + std::abs(r.k))))
        throw NumericalError("compute_jk: J/K symmetry violated (J=" + std::to_string(r.j) +
                             " J'=" + std::to_string(r.j_alt) + " K=" + std::to_string(r.k) +
                             " K'=" + std::to_string(r.k_alt) + ")");
    return r;
}

std::pair<double, double> gammas(double j, double k) {
    const double gd = 2.0 * (j - k);
    const double go = 2.0 * (j + k);
    if (!(gd > 0.0) || !(go > 0.0))
        std::cerr << "warning: nonpositive width Gamma_diag=" << gd
                  << " Gamma_offdiag=" << go << " (upstream failure?)\n";
    return {gd, go};
}

double gamma_tilde(double gamma_offdiag_t, double gamma, double beta, double omega_r) {
    if (!(gamma > 0.0))
        throw ParamError("gamma_tilde: rescaling undefined for gamma = 0");
    return beta / (8.0 * gamma) * (gamma_offdiag_t - 2.0 * omega_r);
}

double master_equation_reference(double gamma, double beta, double t) {
    if (!(beta > 0.0)) throw ParamError("master_equation_reference: beta must be positive");
    return 8.0 * gamma * t / beta;
}

DensityGrid density_grid(const QuadraticForm& qf, const Factorization& fact,
                         const GridSpec& spec) {
    if (spec.n < 1) throw ParamError("density_grid: empty grid");
    const JK jk = compute_jk(qf, fact);
    const auto [gd, go] = gammas(jk.j, jk.k);

    DensityGrid grid;
    grid.norm = spec.norm;
    grid.points.resize(spec.n);
    const double step = spec.n > 1 ? 2.0 * spec.half_width / (spec.n - 1) : 0.0;
    for (int i = 0; i < spec.n; ++i)
        grid.points[i] = -spec.half_width + i * step;

    grid.abs_rho.resize(spec.n, spec.n);
    for (int i = 0; i < spec.n; ++i) {
        for (int j2 = 0; j2 < spec.n; ++j2) {
            const double p = 0.5 * (grid.points[i] + grid.points[j2]);
            const double m = 0.5 * (grid.points[i] - grid.points[j2]);
            grid.abs_rho(i, j2) = std::exp(-0.5 * gd * p * p - 0.5 * go * m * m);
        }
    }

    if (spec.norm == Normalization::Trace && spec.n > 1) {
        // trapezoidal trace quadrature along the diagonal
        double tr = 0.0;
        for (int i = 0; i < spec.n; ++i) {
            const double w = (i == 0 || i == spec.n - 1) ? 0.5 : 1.0;
            tr += w * grid.abs_rho(i, i);
        }
        tr *= step;
        if (!(tr > 0.0)) throw NumericalError("density_grid: vanishing trace");
        grid.abs_rho /= tr;
    }
    return grid;
}

} // namespace clsaddle
