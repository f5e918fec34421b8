#pragma once

#include <memory>

#include <Eigen/Dense>

#include "clsaddle/assembly.hpp"

namespace clsaddle {

// Sparse LU factorization of the complex symmetric matrix m of a
// QuadraticForm, reusable for repeated solves. Immutable after construction;
// solve() is const and safe to call concurrently, but the sweep driver gives
// each worker its own factorization anyway (the dimension depends on n_t).
class Factorization {
public:
    explicit Factorization(const QuadraticForm& qf);  // throws SingularMatrixError
    ~Factorization();
    Factorization(Factorization&&) noexcept;
    Factorization& operator=(Factorization&&) noexcept;

    int dim() const { return d_; }

    // Residual-checked solve: ||m x - rhs||_inf <= 1e-10 (1 + ||rhs||_inf).
    Eigen::VectorXcd solve(const Eigen::VectorXcd& rhs) const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
    int d_ = 0;
};

// Gaussian elimination with partial pivoting on the densified matrix.
// Test oracle, guarded to d <= 2000.
Eigen::VectorXcd solve_dense_oracle(const QuadraticForm& qf, const Eigen::VectorXcd& rhs);

} // namespace clsaddle
