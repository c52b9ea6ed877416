#pragma once

// Shared test-side helpers: seeded random instances and an independent
// linear-space enumeration used as the ground-truth oracle for the oracle.

#include <cmath>
#include <random>
#include <vector>

#include "spintree/graph.hpp"
#include "spintree/model.hpp"

namespace testutil {

using spintree::Graph;
using spintree::Spin;
using spintree::SpinSystem;

// Random connected graph: attachment tree plus a few extra edges, degree
// capped. Optionally pins a random subset, always leaving >= 1 vertex free.
inline Graph random_connected_graph(std::mt19937_64& rng, int n_min, int n_max,
                                    int max_degree, double pin_prob = 0.0) {
    int n = n_min + static_cast<int>(rng() % static_cast<std::uint64_t>(n_max - n_min + 1));
    std::vector<int> deg(static_cast<size_t>(n), 0);
    std::vector<std::pair<int, int>> edges;
    for (int v = 1; v < n; ++v) {
        std::vector<int> cand;
        for (int u = 0; u < v; ++u)
            if (deg[static_cast<size_t>(u)] < max_degree) cand.push_back(u);
        int u = cand[rng() % cand.size()];
        edges.emplace_back(u, v);
        ++deg[static_cast<size_t>(u)];
        ++deg[static_cast<size_t>(v)];
    }
    int extra = static_cast<int>(rng() % static_cast<std::uint64_t>(n));
    for (int t = 0; t < 8 * extra; ++t) {
        int a = static_cast<int>(rng() % static_cast<std::uint64_t>(n));
        int b = static_cast<int>(rng() % static_cast<std::uint64_t>(n));
        if (a == b) continue;
        if (a > b) std::swap(a, b);
        if (deg[static_cast<size_t>(a)] >= max_degree || deg[static_cast<size_t>(b)] >= max_degree)
            continue;
        bool dup = false;
        for (auto& [x, y] : edges)
            if (x == a && y == b) { dup = true; break; }
        if (dup) continue;
        edges.emplace_back(a, b);
        ++deg[static_cast<size_t>(a)];
        ++deg[static_cast<size_t>(b)];
    }
    std::vector<std::pair<int, Spin>> pins;
    if (pin_prob > 0.0) {
        std::uniform_real_distribution<double> u01(0.0, 1.0);
        for (int v = 0; v < n; ++v)
            if (u01(rng) < pin_prob) pins.emplace_back(v, rng() & 1 ? Spin::plus : Spin::minus);
        if (static_cast<int>(pins.size()) == n) pins.pop_back();  // keep a free vertex
    }
    return Graph(n, std::move(edges), std::move(pins));
}

inline SpinSystem random_soft_antiferro(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> act(0.05, 0.95);
    std::uniform_real_distribution<double> logl(-1.6, 1.6);
    double beta = act(rng), gamma = act(rng);
    while (beta * gamma >= 0.98) { beta = act(rng); gamma = act(rng); }
    return SpinSystem(beta, gamma, std::exp(logl(rng)));
}

// Ground truth by direct product-weight summation, no logs: a second opinion
// structurally independent of the library's log-sum-exp path.
struct LinearExact {
    double log_Z;
    std::vector<int> vertices;      // free, ascending
    std::vector<double> marginals;  // P(+) per free vertex
};

inline LinearExact linear_enumeration(const SpinSystem& sys, const Graph& g) {
    const int n = g.vertex_count();
    std::vector<int> free_v;
    for (int v = 0; v < n; ++v)
        if (!g.pinned(v)) free_v.push_back(v);
    const int k = static_cast<int>(free_v.size());

    std::vector<int> spin(static_cast<size_t>(n), +1);  // +1 / -1
    for (int v = 0; v < n; ++v)
        if (auto p = g.pin(v)) spin[static_cast<size_t>(v)] = (*p == Spin::plus) ? +1 : -1;

    double total = 0.0;
    std::vector<double> plus_mass(static_cast<size_t>(k), 0.0);
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << k); ++mask) {
        for (int j = 0; j < k; ++j)
            spin[static_cast<size_t>(free_v[static_cast<size_t>(j)])] = (mask >> j) & 1 ? +1 : -1;
        double w = 1.0;
        for (int v = 0; v < n; ++v)
            if (spin[static_cast<size_t>(v)] < 0) w *= sys.lambda;
        for (auto& [a, b] : g.edges()) {
            int sa = spin[static_cast<size_t>(a)], sb = spin[static_cast<size_t>(b)];
            if (sa == sb) w *= (sa > 0 ? sys.beta : sys.gamma);
        }
        total += w;
        for (int j = 0; j < k; ++j)
            if ((mask >> j) & 1) plus_mass[static_cast<size_t>(j)] += w;
    }
    LinearExact res;
    res.log_Z = std::log(total);
    res.vertices = free_v;
    for (int j = 0; j < k; ++j) res.marginals.push_back(plus_mass[static_cast<size_t>(j)] / total);
    return res;
}

}  // namespace testutil
