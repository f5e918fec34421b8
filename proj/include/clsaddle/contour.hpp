#pragma once

#include <optional>
#include <vector>

#include "clsaddle/errors.hpp"

namespace clsaddle {

// Segments of the doubled real-time contour plus the Euclidean thermal leg.
enum class Segment {
    ForwardSystem,
    BackwardSystem,
    ForwardEnv,
    BackwardEnv,
    EuclideanEnv,
};

struct Node {
    Segment seg;
    int osc;    // 0-based oscillator id for env segments, ignored for system
    int slice;  // time slice n, or Euclidean slice j
};

// Bijection between contour nodes and flat variable indices 0..d-1.
//
// Per oscillator the forward branch holds slices 0..n_t, the backward branch
// holds slices 0..n_t-1 (slice n_t is identified with the forward one: trace
// over the environment), and the Euclidean leg holds interior slices
// 1..n_beta-1 (slice 0 is the backward start, slice n_beta the forward start).
// The system branches hold slices 0..n_t-1; slice n_t is the fixed boundary
// value x_F (resp. x_tilde_F) and is not a variable.
class ContourIndex {
public:
    ContourIndex(int n_t, int n_beta, int n_env);

    int n_t() const { return n_t_; }
    int n_beta() const { return n_beta_; }
    int n_env() const { return n_env_; }
    int dim() const { return d_; }

    // Flat index of a node; identified nodes resolve to their canonical
    // variable. Requesting the fixed system boundary slice throws.
    int index(const Node& n) const;

    // Canonical node of a flat index (inverse of index() on canonical nodes).
    Node node(int mu) const;

private:
    int osc_base(int k) const { return 2 * n_t_ + k * (2 * n_t_ + n_beta_); }

    int n_t_, n_beta_, n_env_, d_;
};

// One nearest-neighbor link of the contour. Endpoints are flat indices;
// nullopt marks the fixed boundary x_F / x_tilde_F on the system branches.
struct Link {
    Segment seg;
    int osc;    // 0 for system segments
    int slice;  // link connects slice and slice+1 of its segment
    std::optional<int> from;
    std::optional<int> to;
};

// Every link of the contour, including those crossing the identifications.
std::vector<Link> enumerate_links(const ContourIndex& idx);

} // namespace clsaddle
