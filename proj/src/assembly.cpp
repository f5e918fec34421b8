#include "clsaddle/assembly.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <vector>

namespace clsaddle {

namespace {

constexpr Complex kImag{0.0, 1.0};

struct Accumulator {
    std::vector<Eigen::Triplet<Complex>> trips;
    Eigen::VectorXcd lin_xf;   // coefficient of x_F * X_mu in S_eff
    Eigen::VectorXcd lin_xtf;  // coefficient of xt_F * X_mu in S_eff
    Complex k_xf2{};           // coefficient of x_F^2
    Complex k_xtf2{};          // coefficient of xt_F^2
    Complex k_cross{};         // coefficient of x_F * xt_F

    explicit Accumulator(int d)
        : lin_xf(Eigen::VectorXcd::Zero(d)), lin_xtf(Eigen::VectorXcd::Zero(d)) {}

    // Adds a * X_mu X_nu to S_eff; m holds 1/2 X^T m X, so diagonals double.
    void quad(int mu, int nu, Complex a) {
        if (mu == nu) {
            trips.emplace_back(mu, mu, 2.0 * a);
        } else {
            trips.emplace_back(mu, nu, a);
            trips.emplace_back(nu, mu, a);
        }
    }
};

} // namespace

QuadraticForm assemble(const ModelParams& model, const DerivedParams& derived,
                       const LatticeParams& lat, const ContourIndex& idx) {
    model.validate();
    if (static_cast<int>(derived.omega_k.size()) != idx.n_env() ||
        model.n_env != idx.n_env())
        throw NumericalError("assemble: inconsistent environment dimensions");

    const int n_t = idx.n_t();
    const int n_beta = idx.n_beta();
    const double eps = lat.eps;
    const double eps_t = lat.eps_tilde;
    const double wb2 = derived.omega_b * derived.omega_b;
    const double c = derived.coupling_c;
    const double sigma_sq = model.sigma_sq();

    Accumulator acc(idx.dim());

    // One real-time branch of the system chain with fixed boundary at slice
    // n_t. sgn is -i on the forward branch, +i on the backward branch; lin
    // collects the terms linear in the boundary value, kconst the quadratic
    // boundary constant.
    auto system_branch = [&](Segment seg, Complex sgn, Eigen::VectorXcd& lin,
                             Complex& kconst) {
        for (int n = 0; n < n_t; ++n) {
            const int a = idx.index({seg, -1, n});
            const bool b_fixed = (n + 1 == n_t);
            const int b = b_fixed ? -1 : idx.index({seg, -1, n + 1});
            // kinetic sgn/(2 eps) (y_n - y_{n+1})^2
            acc.quad(a, a, sgn / (2.0 * eps));
            if (b_fixed) {
                lin[a] += -sgn / eps;
                kconst += sgn / (2.0 * eps);
            } else {
                acc.quad(b, b, sgn / (2.0 * eps));
                acc.quad(a, b, -sgn / eps);
            }
            // potential -sgn wb2 eps/4 (y_n^2 + y_{n+1}^2)
            acc.quad(a, a, -sgn * wb2 * eps / 4.0);
            if (b_fixed)
                kconst += -sgn * wb2 * eps / 4.0;
            else
                acc.quad(b, b, -sgn * wb2 * eps / 4.0);
        }
    };
    system_branch(Segment::ForwardSystem, -kImag, acc.lin_xf, acc.k_xf2);
    system_branch(Segment::BackwardSystem, kImag, acc.lin_xtf, acc.k_xtf2);

    for (int k = 0; k < idx.n_env(); ++k) {
        const double wk2 = derived.omega_k[k] * derived.omega_k[k];

        // Real-time environment chains; slice n_t resolves to the shared
        // traced node on both branches, so contributions there accumulate.
        auto env_branch = [&](Segment env_seg, Segment sys_seg, Complex sgn,
                              Eigen::VectorXcd& lin) {
            for (int n = 0; n < n_t; ++n) {
                const int a = idx.index({env_seg, k, n});
                const int b = idx.index({env_seg, k, n + 1});
                acc.quad(a, a, sgn / (2.0 * eps));
                acc.quad(b, b, sgn / (2.0 * eps));
                acc.quad(a, b, -sgn / eps);
                acc.quad(a, a, -sgn * wk2 * eps / 4.0);
                acc.quad(b, b, -sgn * wk2 * eps / 4.0);
            }
            // coupling sgn c eps sum_n w_n x_n q_n, trapezoidal node weights
            for (int n = 0; n <= n_t; ++n) {
                const double w = (n == 0 || n == n_t) ? 0.5 : 1.0;
                const int q = idx.index({env_seg, k, n});
                if (n < n_t)
                    acc.quad(idx.index({sys_seg, -1, n}), q, sgn * c * eps * w);
                else
                    lin[q] += sgn * c * eps * w;
            }
        };
        env_branch(Segment::ForwardEnv, Segment::ForwardSystem, -kImag, acc.lin_xf);
        env_branch(Segment::BackwardEnv, Segment::BackwardSystem, kImag, acc.lin_xtf);

        // Euclidean thermal leg (real, Euclidean signature).
        for (int j = 0; j < n_beta; ++j) {
            const int a = idx.index({Segment::EuclideanEnv, k, j});
            const int b = idx.index({Segment::EuclideanEnv, k, j + 1});
            acc.quad(a, a, Complex{1.0 / (2.0 * eps_t), 0.0});
            acc.quad(b, b, Complex{1.0 / (2.0 * eps_t), 0.0});
            acc.quad(a, b, Complex{-1.0 / eps_t, 0.0});
            acc.quad(a, a, Complex{wk2 * eps_t / 4.0, 0.0});
            acc.quad(b, b, Complex{wk2 * eps_t / 4.0, 0.0});
        }
    }

    // Initial wave packet (x_0^2 + xt_0^2) / (4 sigma^2).
    const double packet = 1.0 / (4.0 * sigma_sq);
    acc.quad(idx.index({Segment::ForwardSystem, -1, 0}), idx.index({Segment::ForwardSystem, -1, 0}),
             Complex{packet, 0.0});
    acc.quad(idx.index({Segment::BackwardSystem, -1, 0}), idx.index({Segment::BackwardSystem, -1, 0}),
             Complex{packet, 0.0});

    QuadraticForm qf;
    qf.d = idx.dim();
    qf.b = 1.0 / eps - wb2 * eps / 2.0;
    qf.m.resize(qf.d, qf.d);
    qf.m.setFromTriplets(acc.trips.begin(), acc.trips.end());

    // Extract the real source vectors from C_mu = i (c_mu x_F - ct_mu xt_F):
    // the linear part of S_eff is -C.X, so c_mu = i lin_xf, ct_mu = -i lin_xtf.
    qf.c_vec.resize(qf.d);
    qf.c_tilde_vec.resize(qf.d);
    const double tol = 1e-12 * (1.0 / eps + c * eps + 1.0);
    for (int mu = 0; mu < qf.d; ++mu) {
        const Complex cv = kImag * acc.lin_xf[mu];
        const Complex ctv = -kImag * acc.lin_xtf[mu];
        if (std::abs(cv.imag()) > tol || std::abs(ctv.imag()) > tol)
            throw NumericalError("assemble: boundary source vectors not real");
        qf.c_vec[mu] = cv.real();
        qf.c_tilde_vec[mu] = ctv.real();
    }

    // The boundary constants must reproduce B = -(i/2) b (x_F^2 - xt_F^2).
    const Complex b_expect = -0.5 * kImag * qf.b;
    if (std::abs(acc.k_xf2 - b_expect) > tol || std::abs(acc.k_xtf2 + b_expect) > tol ||
        std::abs(acc.k_cross) > tol)
        throw NumericalError("assemble: boundary constant mismatch");

    return qf;
}

Complex evaluate_action_direct(const Eigen::VectorXd& x, double x_f, double x_tilde_f,
                               const ModelParams& model, const DerivedParams& derived,
                               const LatticeParams& lat, const ContourIndex& idx) {
    if (x.size() != idx.dim())
        throw NumericalError("evaluate_action_direct: vector length mismatch");
    const int n_t = idx.n_t();
    const int n_beta = idx.n_beta();
    const double eps = lat.eps;
    const double eps_t = lat.eps_tilde;
    const double wb2 = derived.omega_b * derived.omega_b;
    const double c = derived.coupling_c;

    auto val = [&](Segment seg, int k, int n) -> double {
        if (seg == Segment::ForwardSystem && n == n_t) return x_f;
        if (seg == Segment::BackwardSystem && n == n_t) return x_tilde_f;
        return x[idx.index({seg, k, n})];
    };

    // Discretized real-time action S of one branch.
    auto branch_action = [&](Segment sys_seg, Segment env_seg) -> double {
        double s = 0.0;
        for (int n = 0; n < n_t; ++n) {
            const double a = val(sys_seg, -1, n);
            const double b = val(sys_seg, -1, n + 1);
            s += 0.5 * eps * ((a - b) * (a - b) / (eps * eps) - wb2 * (a * a + b * b) / 2.0);
        }
        for (int k = 0; k < idx.n_env(); ++k) {
            const double wk2 = derived.omega_k[k] * derived.omega_k[k];
            for (int n = 0; n < n_t; ++n) {
                const double qa = val(env_seg, k, n);
                const double qb = val(env_seg, k, n + 1);
                s += 0.5 * eps * ((qa - qb) * (qa - qb) / (eps * eps) - wk2 * (qa * qa + qb * qb) / 2.0);
                s += c * eps * (val(sys_seg, -1, n) * qa + val(sys_seg, -1, n + 1) * qb) / 2.0;
            }
        }
        return s;
    };

    const double s_fwd = branch_action(Segment::ForwardSystem, Segment::ForwardEnv);
    const double s_bwd = branch_action(Segment::BackwardSystem, Segment::BackwardEnv);

    double s0 = 0.0;
    for (int k = 0; k < idx.n_env(); ++k) {
        const double wk2 = derived.omega_k[k] * derived.omega_k[k];
        for (int j = 0; j < n_beta; ++j) {
            const double qa = val(Segment::EuclideanEnv, k, j);
            const double qb = val(Segment::EuclideanEnv, k, j + 1);
            s0 += 0.5 * eps_t * ((qb - qa) * (qb - qa) / (eps_t * eps_t) + wk2 * (qa * qa + qb * qb) / 2.0);
        }
    }

    const double x0 = val(Segment::ForwardSystem, -1, 0);
    const double xt0 = val(Segment::BackwardSystem, -1, 0);
    const double packet = (x0 * x0 + xt0 * xt0) / (4.0 * model.sigma_sq());

    return -kImag * (s_fwd - s_bwd) + Complex{s0 + packet, 0.0};
}

void dump_matrix(std::ostream& os, const QuadraticForm& qf) {
    struct Entry {
        int r, c;
        Complex v;
    };
    std::vector<Entry> entries;
    entries.reserve(qf.m.nonZeros());
    for (int col = 0; col < qf.m.outerSize(); ++col)
        for (SparseMatrixC::InnerIterator it(qf.m, col); it; ++it)
            entries.push_back({static_cast<int>(it.row()), static_cast<int>(it.col()), it.value()});
    std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
        return a.r != b.r ? a.r < b.r : a.c < b.c;
    });
    for (const auto& e : entries)
        os << e.r << ' ' << e.c << ' ' << e.v.real() << ' ' << e.v.imag() << '\n';
}

} // namespace clsaddle
