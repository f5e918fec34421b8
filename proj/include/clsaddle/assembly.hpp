#pragma once

#include <complex>
#include <iosfwd>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include "clsaddle/contour.hpp"
#include "clsaddle/params.hpp"

namespace clsaddle {

using Complex = std::complex<double>;
using SparseMatrixC = Eigen::SparseMatrix<Complex>;

// The effective action reduced to a quadratic form:
//   S_eff(X; x_F, xt_F) = 1/2 X^T m X - C.X + B,
//   C_mu = i (c_vec_mu x_F - c_tilde_vec_mu xt_F),
//   B = -(i/2) b (x_F^2 - xt_F^2).
// m is complex symmetric (not Hermitian) and independent of the boundary
// values; c_vec and c_tilde_vec are real and supported only on the last
// system slice and the traced environment nodes.
struct QuadraticForm {
    SparseMatrixC m;
    Eigen::VectorXd c_vec;
    Eigen::VectorXd c_tilde_vec;
    double b = 0.0;
    int d = 0;
};

QuadraticForm assemble(const ModelParams& model, const DerivedParams& derived,
                       const LatticeParams& lat, const ContourIndex& idx);

// Literal summation of S_eff over contour links and sites, no matrix.
// Serves as the assembly oracle.
Complex evaluate_action_direct(const Eigen::VectorXd& x, double x_f, double x_tilde_f,
                               const ModelParams& model, const DerivedParams& derived,
                               const LatticeParams& lat, const ContourIndex& idx);

// Coordinate dump "row col re im", one entry per line, sorted by (row, col).
void dump_matrix(std::ostream& os, const QuadraticForm& qf);

} // namespace clsaddle
