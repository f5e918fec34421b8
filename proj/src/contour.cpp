#include "clsaddle/contour.hpp"

#include <string>

namespace clsaddle {

ContourIndex::ContourIndex(int n_t, int n_beta, int n_env)
    : n_t_(n_t), n_beta_(n_beta), n_env_(n_env) {
    if (n_t < 1) throw ParamError("n_t must be at least 1");
    if (n_beta < 1) throw ParamError("n_beta must be at least 1");
    if (n_env < 0) throw ParamError("n_env must be nonnegative");
    d_ = 2 * n_t * (1 + n_env) + n_beta * n_env;
}

int ContourIndex::index(const Node& n) const {
    auto bad = [&](const char* what) -> int {
        throw ParamError(std::string("ContourIndex::index: ") + what);
    };
    switch (n.seg) {
        case Segment::ForwardSystem:
            if (n.slice < 0 || n.slice >= n_t_) return bad("system slice out of range");
            return n.slice;
        case Segment::BackwardSystem:
            if (n.slice < 0 || n.slice >= n_t_) return bad("system slice out of range");
            return n_t_ + n.slice;
        default:
            break;
    }
    if (n.osc < 0 || n.osc >= n_env_) return bad("oscillator id out of range");
    const int base = osc_base(n.osc);
    switch (n.seg) {
        case Segment::ForwardEnv:
            if (n.slice < 0 || n.slice > n_t_) return bad("env slice out of range");
            return base + n.slice;
        case Segment::BackwardEnv:
            if (n.slice < 0 || n.slice > n_t_) return bad("env slice out of range");
            if (n.slice == n_t_) return base + n_t_;  // trace identification
            return base + (n_t_ + 1) + n.slice;
        case Segment::EuclideanEnv:
            if (n.slice < 0 || n.slice > n_beta_) return bad("Euclidean slice out of range");
            if (n.slice == n_beta_) return base;               // q^k_0
            if (n.slice == 0) return base + (n_t_ + 1);        // backward-env start
            return base + (2 * n_t_ + 1) + (n.slice - 1);
        default:
            return bad("unreachable");
    }
}

Node ContourIndex::node(int mu) const {
    if (mu < 0 || mu >= d_) throw ParamError("ContourIndex::node: index out of range");
    if (mu < n_t_) return {Segment::ForwardSystem, -1, mu};
    if (mu < 2 * n_t_) return {Segment::BackwardSystem, -1, mu - n_t_};
    const int per_osc = 2 * n_t_ + n_beta_;
    const int k = (mu - 2 * n_t_) / per_osc;
    const int off = (mu - 2 * n_t_) % per_osc;
    if (off <= n_t_) return {Segment::ForwardEnv, k, off};
    if (off <= 2 * n_t_) return {Segment::BackwardEnv, k, off - (n_t_ + 1)};
    return {Segment::EuclideanEnv, k, off - (2 * n_t_ + 1) + 1};
}

std::vector<Link> enumerate_links(const ContourIndex& idx) {
    std::vector<Link> links;
    const int n_t = idx.n_t();
    const int n_beta = idx.n_beta();
    links.reserve(2 * n_t + idx.n_env() * (2 * n_t + n_beta));

    auto sys_end = [&](Segment seg, int slice) -> std::optional<int> {
        if (slice == n_t) return std::nullopt;  // fixed x_F / x_tilde_F
        return idx.index({seg, -1, slice});
    };
    for (int n = 0; n < n_t; ++n)
        links.push_back({Segment::ForwardSystem, 0, n,
                         sys_end(Segment::ForwardSystem, n),
                         sys_end(Segment::ForwardSystem, n + 1)});
    for (int n = 0; n < n_t; ++n)
        links.push_back({Segment::BackwardSystem, 0, n,
                         sys_end(Segment::BackwardSystem, n),
                         sys_end(Segment::BackwardSystem, n + 1)});

    for (int k = 0; k < idx.n_env(); ++k) {
        for (int n = 0; n < n_t; ++n)
            links.push_back({Segment::ForwardEnv, k, n,
                             idx.index({Segment::ForwardEnv, k, n}),
                             idx.index({Segment::ForwardEnv, k, n + 1})});
        for (int n = 0; n < n_t; ++n)
            links.push_back({Segment::BackwardEnv, k, n,
                             idx.index({Segment::BackwardEnv, k, n}),
                             idx.index({Segment::BackwardEnv, k, n + 1})});
        for (int j = 0; j < n_beta; ++j)
            links.push_back({Segment::EuclideanEnv, k, j,
                             idx.index({Segment::EuclideanEnv, k, j}),
                             idx.index({Segment::EuclideanEnv, k, j + 1})});
    }
    return links;
}

} // namespace clsaddle
