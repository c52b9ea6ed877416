#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "spintree/model.hpp"

namespace spintree {

struct MarginalInterval {
    double lo = 0;
    double hi = 1;

    double width() const { return hi - lo; }
    double mid() const { return 0.5 * (lo + hi); }
    bool contains(double p) const { return lo <= p && p <= hi; }
};

struct SawOptions {
    // Evaluation aborts (numeric error) once this many tree nodes have been
    // visited; guards near-boundary instances whose depth would be huge.
    std::uint64_t node_cap = 1'000'000;
    // Per-vertex neighbor orderings overriding the default ascending-id rank
    // (exactness holds for any fixed choice; tests permute it). ranking[v]
    // must be a permutation of neighbors(v).
    const std::vector<std::vector<int>>* ranking = nullptr;
};

struct SawEvaluation {
    MarginalInterval interval;
    std::uint64_t nodes = 0;  // nodes visited (leaves included)
    int depth_limit = 0;
};

// Walk tree of non-revisiting walks from root, built lazily depth-first and
// folded into a rigorous enclosure of the root's occupation probability.
//
// Children of a walk ending at u (arrived from w), in rank order over u's
// neighbors x != w:
//   - x carries a source pin          -> leaf with that pin
//   - x is on the current walk, which had left x via y (a cycle closes)
//                                     -> leaf pinned + if rank_x(u) > rank_x(y),
//                                        - if rank_x(u) < rank_x(y)
//   - otherwise                       -> the walk extends to x
// Expansion stops at depth_limit; a frontier node that would have children
// becomes a free leaf [0,1], one with no children at all evaluates exactly.
// Pinned leaves give [1,1] / [0,0]; an internal node with children intervals
// [lo_i, hi_i] gives [F(hi_1..hi_k), F(lo_1..lo_k)] (F is antitone).
SawEvaluation eval_saw_interval(const IsingView& view, const Graph& g, int root,
                                int depth_limit, const SawOptions& opts = {});

// Depth limit that makes evaluation exact: a non-revisiting walk has at most n
// vertices, so every node (leaf children included) lives at depth <= n.
int full_saw_depth(const Graph& g);

// Preorder visitation of the same tree for structural inspection in tests.
struct SawNodeView {
    int origin;       // source-graph vertex
    int depth;
    int pin;          // -1 / 0 / +1 (0 = free)
    double lambda_v;  // node activity from the view
    int child_count;  // 0 for leaves and frontier nodes
};

std::uint64_t visit_saw_tree(const IsingView& view, const Graph& g, int root,
                             int depth_limit,
                             const std::function<void(const SawNodeView&)>& visit,
                             const SawOptions& opts = {});

// Smallest l >= 0 with L1*L2*c^l <= epsilon: depth needed for the decay
// envelope to certify an enclosure of width epsilon. Errors: c >= 1
// (non-contractive), or l beyond max_depth (near-boundary blowup).
int required_depth(double epsilon, double c, double L1, double L2,
                   long max_depth = 10'000'000);

}  // namespace spintree
