#pragma once

#include <vector>

#include "spintree/model.hpp"

namespace spintree {

// Brute-force ground truth by enumeration over the free (unpinned) vertices.
// Deterministic: plain binary counter, bit j = free vertex j (ascending id),
// set bit = '+'; log-sum-exp in two passes (max first, then the shifted sum in
// the same order).

inline constexpr int default_enumeration_cap = 26;

struct ExactResult {
    double log_Z = 0;
    std::vector<int> marginal_vertices;  // free vertices, ascending
    std::vector<double> marginals;       // P(spin + at v), aligned with marginal_vertices
};

double exact_partition(const SpinSystem& sys, const Graph& g,
                       int cap = default_enumeration_cap);

double exact_marginal(const SpinSystem& sys, const Graph& g, int v,
                      int cap = default_enumeration_cap);

// log_Z plus every free-vertex marginal in one enumeration.
ExactResult exact_all(const SpinSystem& sys, const Graph& g,
                      int cap = default_enumeration_cap);

}  // namespace spintree
