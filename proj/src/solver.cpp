#include "clsaddle/solver.hpp"

#include <cmath>
#include <string>

#include <Eigen/SparseLU>

namespace clsaddle {

struct Factorization::Impl {
    Eigen::SparseLU<SparseMatrixC, Eigen::COLAMDOrdering<int>> lu;
    SparseMatrixC m;  // kept for residual checks
};

Factorization::Factorization(const QuadraticForm& qf) : impl_(new Impl), d_(qf.d) {
    impl_->m = qf.m;
    impl_->m.makeCompressed();
    impl_->lu.compute(impl_->m);
    if (impl_->lu.info() != Eigen::Success) {
        std::string msg = impl_->lu.lastErrorMessage();
        throw SingularMatrixError("factorize: matrix is singular (" +
                                  (msg.empty() ? std::string("no pivot found") : msg) + ")");
    }
}

Factorization::~Factorization() = default;
Factorization::Factorization(Factorization&&) noexcept = default;
Factorization& Factorization::operator=(Factorization&&) noexcept = default;

Eigen::VectorXcd Factorization::solve(const Eigen::VectorXcd& rhs) const {
    if (rhs.size() != d_)
        throw NumericalError("solve: rhs dimension mismatch");
    Eigen::VectorXcd x = impl_->lu.solve(rhs);
    const double rhs_norm = rhs.size() ? rhs.lpNorm<Eigen::Infinity>() : 0.0;
    const double resid = (impl_->m * x - rhs).lpNorm<Eigen::Infinity>();
    if (!(resid <= 1e-10 * (1.0 + rhs_norm)))
        throw SingularMatrixError("solve: residual " + std::to_string(resid) +
                                  " exceeds tolerance, matrix is numerically singular");
    return x;
}

Eigen::VectorXcd solve_dense_oracle(const QuadraticForm& qf, const Eigen::VectorXcd& rhs) {
    const int d = qf.d;
    if (d > 2000)
        throw NumericalError("solve_dense_oracle: dimension " + std::to_string(d) +
                             " exceeds the dense guard (2000)");
    if (rhs.size() != d)
        throw NumericalError("solve_dense_oracle: rhs dimension mismatch");

    Eigen::MatrixXcd a = Eigen::MatrixXcd(qf.m);
    Eigen::VectorXcd b = rhs;
    const double max_abs = d ? a.cwiseAbs().maxCoeff() : 0.0;
    const double pivot_tol = 1e-14 * max_abs;

    for (int col = 0; col < d; ++col) {
        int piv = col;
        double best = std::abs(a(col, col));
        for (int r = col + 1; r < d; ++r) {
            const double v = std::abs(a(r, col));
            if (v > best) {
                best = v;
                piv = r;
            }
        }
        if (best <= pivot_tol)
            throw SingularMatrixError("solve_dense_oracle: zero pivot at index " +
                                      std::to_string(col));
        if (piv != col) {
            a.row(piv).swap(a.row(col));
            std::swap(b[piv], b[col]);
        }
        for (int r = col + 1; r < d; ++r) {
            const Complex f = a(r, col) / a(col, col);
            if (f == Complex{}) continue;
            a.row(r).tail(d - col) -= f * a.row(col).tail(d - col);
            b[r] -= f * b[col];
        }
    }
    for (int r = d - 1; r >= 0; --r) {
        Complex s = b[r];
        for (int c2 = r + 1; c2 < d; ++c2) s -= a(r, c2) * b[c2];
        b[r] = s / a(r, r);
    }
    return b;
}

} // namespace clsaddle
