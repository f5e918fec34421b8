#pragma once

#include <utility>

#include <Eigen/Dense>

#include "clsaddle/params.hpp"

namespace clsaddle {

// Exact continuum reference for the lattice pipeline: the full system is a
// quadratic Hamiltonian with a Gaussian initial state, so its phase-space
// covariance matrix evolves by conjugation with a symplectic propagator and
// the reduced-density-matrix widths follow in closed form (see
// docs/gaussian_widths.md for the derivation).
struct CovarianceState {
    // symmetric (2 + 2 n_env) x (2 + 2 n_env), ordering (x, p, q1, p1, ...)
    Eigen::MatrixXd sigma;
    double t = 0.0;
};

// Product state: system wave packet with variance sigma^2, each bath
// oscillator thermal at inverse temperature beta.
CovarianceState initial_covariance(const ModelParams& model, const DerivedParams& derived);

// Sigma(t) = S(t) Sigma(0) S(t)^T for the Hamiltonian
//   H = p^2/2 + omega_b^2 x^2/2 + sum_k (p_k^2/2 + omega_k^2 q_k^2/2)
//       - c x sum_k q_k,
// built from the eigendecomposition of the frequency-squared matrix.
// Throws InstabilityError if that matrix has a negative eigenvalue.
CovarianceState evolve(const CovarianceState& state, const DerivedParams& derived, double t);

// (Gamma_diag, Gamma_offdiag) = (1/S_xx, 4 det(S2)/S_xx) from the reduced
// system block S2 = [[S_xx, S_xp], [S_xp, S_pp]].
std::pair<double, double> widths_from_covariance(const CovarianceState& state);

} // namespace clsaddle
