#include <cmath>
#include <random>

#include <doctest.h>

#include "clsaddle/assembly.hpp"
#include "clsaddle/contour.hpp"
#include "clsaddle/solver.hpp"

using namespace clsaddle;

namespace {

QuadraticForm build(int n_t, int n_beta, int n_env, double gamma, double beta = 0.1) {
    ModelParams model;
    model.omega_r = 0.08;
    model.omega_cut = 2.0;
    model.gamma = n_env == 0 ? 0.0 : gamma;
    model.beta = beta;
    model.n_env = n_env;
    const DerivedParams derived = DerivedParams::from(model);
    const LatticeParams lat = LatticeParams::make(0.05, n_t, beta);
    const ContourIndex idx(n_t, lat.n_beta, n_env);
    return assemble(model, derived, lat, idx);
}

} // namespace

TEST_CASE("constructed solutions") {
    const QuadraticForm qf = build(4, 2, 2, 0.1);
    const Factorization fact(qf);
    CHECK(fact.dim() == qf.d);

    CHECK(fact.solve(Eigen::VectorXcd::Zero(qf.d)).norm() == 0.0);

    Eigen::VectorXcd e1 = Eigen::VectorXcd::Zero(qf.d);
    e1[0] = 1.0;
    const Eigen::VectorXcd x = fact.solve(qf.m * e1);
    CHECK((x - e1).lpNorm<Eigen::Infinity>() <= 1e-10);

    CHECK_THROWS_AS(fact.solve(Eigen::VectorXcd::Zero(qf.d + 1)), NumericalError);
}

TEST_CASE("sparse solve matches the dense oracle") {
    std::mt19937 rng(777);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (auto [n_t, n_env] : {std::pair{3, 1}, {6, 3}, {10, 5}, {12, 8}}) {
        const QuadraticForm qf = build(n_t, 2, n_env, 0.1);
        const Factorization fact(qf);
        for (int rep = 0; rep < 4; ++rep) {
            Eigen::VectorXcd rhs(qf.d);
            for (int i = 0; i < qf.d; ++i) rhs[i] = Complex{gauss(rng), gauss(rng)};
            const Eigen::VectorXcd xs = fact.solve(rhs);
            const Eigen::VectorXcd xd = solve_dense_oracle(qf, rhs);
            const double scale = 1.0 + xd.lpNorm<Eigen::Infinity>();
            CHECK((xs - xd).lpNorm<Eigen::Infinity>() <= 1e-8 * scale);
        }
    }
}

TEST_CASE("decoupled blocks solve independently") {
    const QuadraticForm qf = build(4, 2, 2, 0.0);
    const Factorization fact(qf);
    std::mt19937 rng(4);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Eigen::VectorXcd rhs(qf.d);
    for (int i = 0; i < qf.d; ++i) rhs[i] = Complex{gauss(rng), gauss(rng)};
    const Eigen::VectorXcd x = fact.solve(rhs);

    // solve the system block alone and compare
    const int ns = 8;  // 2 n_t
    QuadraticForm sys;
    sys.d = ns;
    sys.m = qf.m.topLeftCorner(ns, ns);
    sys.c_vec = Eigen::VectorXd::Zero(ns);
    sys.c_tilde_vec = Eigen::VectorXd::Zero(ns);
    const Eigen::VectorXcd xs = solve_dense_oracle(sys, rhs.head(ns));
    CHECK((x.head(ns) - xs).lpNorm<Eigen::Infinity>() <= 1e-9);
}

TEST_CASE("linearity of solve") {
    const QuadraticForm qf = build(6, 3, 2, 0.2);
    const Factorization fact(qf);
    std::mt19937 rng(99);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Eigen::VectorXcd r1(qf.d), r2(qf.d);
    for (int i = 0; i < qf.d; ++i) {
        r1[i] = Complex{gauss(rng), gauss(rng)};
        r2[i] = Complex{gauss(rng), gauss(rng)};
    }
    const Complex alpha{1.7, -0.3};
    const Eigen::VectorXcd lhs = fact.solve(alpha * r1 + r2);
    const Eigen::VectorXcd rhs = alpha * fact.solve(r1) + fact.solve(r2);
    CHECK((lhs - rhs).lpNorm<Eigen::Infinity>() <= 1e-10 * (1.0 + lhs.lpNorm<Eigen::Infinity>()));
}

TEST_CASE("determinism: repeated factorization is bit-identical") {
    const QuadraticForm qf = build(8, 4, 4, 0.1);
    std::mt19937 rng(5);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Eigen::VectorXcd rhs(qf.d);
    for (int i = 0; i < qf.d; ++i) rhs[i] = Complex{gauss(rng), gauss(rng)};
    const Factorization f1(qf);
    const Factorization f2(qf);
    const Eigen::VectorXcd x1 = f1.solve(rhs);
    const Eigen::VectorXcd x2 = f2.solve(rhs);
    for (int i = 0; i < qf.d; ++i) CHECK(x1[i] == x2[i]);
}

TEST_CASE("paper-scale matrix factorizes") {
    const QuadraticForm qf = build(20, 4, 8, 0.1, 0.05);
    CHECK_NOTHROW(Factorization{qf});
    // nonsingularity confirmed by the dense oracle on a probe
    Eigen::VectorXcd rhs = Eigen::VectorXcd::Ones(qf.d);
    CHECK(solve_dense_oracle(qf, rhs).allFinite());
}

TEST_CASE("singular matrix is reported") {
    QuadraticForm qf = build(4, 2, 2, 0.1);
    // zero out one row/column
    const int dead = 3;
    for (int col = 0; col < qf.m.outerSize(); ++col)
        for (SparseMatrixC::InnerIterator it(qf.m, col); it; ++it)
            if (it.row() == dead || it.col() == dead) it.valueRef() = Complex{};
    CHECK_THROWS_AS(Factorization{qf}, SingularMatrixError);
    CHECK_THROWS_AS(solve_dense_oracle(qf, Eigen::VectorXcd::Zero(qf.d)),
                    SingularMatrixError);
}

TEST_CASE("dense oracle size guard") {
    QuadraticForm qf;
    qf.d = 2001;
    qf.m.resize(qf.d, qf.d);
    CHECK_THROWS_AS(solve_dense_oracle(qf, Eigen::VectorXcd::Zero(qf.d)), NumericalError);
}
