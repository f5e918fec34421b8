#include "clsaddle/oracle.hpp"

#include <cmath>
#include <string>

namespace clsaddle {

namespace {

// sin(sqrt(l) t) / sqrt(l), continued through l -> 0
double sinc_sqrt(double l, double t) {
    if (l <= 0.0) return t;
    const double w = std::sqrt(l);
    return std::sin(w * t) / w;
}

} // namespace

CovarianceState initial_covariance(const ModelParams& model, const DerivedParams& derived) {
    model.validate();
    const int n = model.n_env;
    const int dim = 2 * (1 + n);
    CovarianceState st;
    st.sigma = Eigen::MatrixXd::Zero(dim, dim);
    st.t = 0.0;

    const double s2 = model.sigma_sq();
    st.sigma(0, 0) = s2;
    st.sigma(1, 1) = 1.0 / (4.0 * s2);
    for (int k = 0; k < n; ++k) {
        const double w = derived.omega_k[k];
        const double coth = 1.0 / std::tanh(0.5 * model.beta * w);
        st.sigma(2 + 2 * k, 2 + 2 * k) = coth / (2.0 * w);
        st.sigma(3 + 2 * k, 3 + 2 * k) = 0.5 * w * coth;
    }
    return st;
}

CovarianceState evolve(const CovarianceState& state, const DerivedParams& derived, double t) {
    const int m = 1 + static_cast<int>(derived.omega_k.size());
    const int dim = 2 * m;
    if (state.sigma.rows() != dim || state.sigma.cols() != dim)
        throw NumericalError("evolve: covariance dimension mismatch");
    if (!(t >= 0.0)) throw ParamError("evolve: t must be nonnegative");

    // frequency-squared matrix of the coupled oscillators
    Eigen::MatrixXd omega2 = Eigen::MatrixXd::Zero(m, m);
    omega2(0, 0) = derived.omega_b * derived.omega_b;
    for (int k = 1; k < m; ++k) {
        omega2(k, k) = derived.omega_k[k - 1] * derived.omega_k[k - 1];
        omega2(0, k) = omega2(k, 0) = -derived.coupling_c;
    }

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(omega2);
    if (es.info() != Eigen::Success)
        throw NumericalError("evolve: eigendecomposition failed");
    const Eigen::VectorXd lam = es.eigenvalues();
    if (lam[0] < 0.0)
        throw InstabilityError("evolve: unstable normal mode, eigenvalue " +
                               std::to_string(lam[0]));
    const Eigen::MatrixXd& u = es.eigenvectors();

    // normal-mode propagator blocks: r(t) = Cr r + Sr p, p(t) = -Ks r + Cr p
    Eigen::VectorXd cosd(m), sincd(m), wsin(m);
    for (int i = 0; i < m; ++i) {
        const double w = std::sqrt(std::max(lam[i], 0.0));
        cosd[i] = std::cos(w * t);
        sincd[i] = sinc_sqrt(lam[i], t);
        wsin[i] = w * std::sin(w * t);
    }
    const Eigen::MatrixXd cr = u * cosd.asDiagonal() * u.transpose();
    const Eigen::MatrixXd sr = u * sincd.asDiagonal() * u.transpose();
    const Eigen::MatrixXd ks = u * wsin.asDiagonal() * u.transpose();

    // interleave (q..., p...) blocks back into (x, p, q1, p1, ...) ordering
    Eigen::MatrixXd s = Eigen::MatrixXd::Zero(dim, dim);
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
            s(2 * i, 2 * j) = cr(i, j);
            s(2 * i, 2 * j + 1) = sr(i, j);
            s(2 * i + 1, 2 * j) = -ks(i, j);
            s(2 * i + 1, 2 * j + 1) = cr(i, j);
        }
    }

    CovarianceState out;
    out.sigma = s * state.sigma * s.transpose();
    out.sigma = 0.5 * (out.sigma + out.sigma.transpose().eval());
    out.t = state.t + t;
    return out;
}

std::pair<double, double> widths_from_covariance(const CovarianceState& state) {
    const double sxx = state.sigma(0, 0);
    const double sxp = state.sigma(0, 1);
    const double spp = state.sigma(1, 1);
    const double det = sxx * spp - sxp * sxp;
    if (!(sxx > 0.0) || !(det > 0.0))
        throw NumericalError("widths_from_covariance: reduced block not positive definite");
    return {1.0 / sxx, 4.0 * det / sxx};
}

} // namespace clsaddle
