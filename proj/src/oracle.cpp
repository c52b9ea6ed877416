#include "spintree/oracle.hpp"

#include <cmath>
#include <cstdint>
#include <limits>

#include "spintree/errors.hpp"

namespace spintree {

namespace {

constexpr double neg_inf = -std::numeric_limits<double>::infinity();

// One pass over all 2^k assignments of the free vertices, invoking
// fn(mask, log_weight) for each. Pinned spins stay fixed.
template <typename Fn>
void enumerate(const SpinSystem& sys, const Graph& g, int cap, Fn&& fn) {
    const int n = g.vertex_count();
    const int k = g.free_count();
    if (k > cap)
        throw TooLargeError("exact enumeration over " + std::to_string(k) +
                            " free vertices exceeds cap " + std::to_string(cap));
    const std::vector<int> free_v = g.free_vertices();

    Configuration sigma(static_cast<size_t>(n), Spin::minus);
    for (int v = 0; v < n; ++v)
        if (auto p = g.pin(v)) sigma[static_cast<size_t>(v)] = *p;

    const std::uint64_t total = std::uint64_t{1} << k;
    for (std::uint64_t mask = 0; mask < total; ++mask) {
        for (int j = 0; j < k; ++j)
            sigma[static_cast<size_t>(free_v[static_cast<size_t>(j)])] =
                (mask >> j) & 1 ? Spin::plus : Spin::minus;
        fn(mask, log_weight(sys, g, sigma));
    }
}

}  // namespace

ExactResult exact_all(const SpinSystem& sys, const Graph& g, int cap) {
    const int k = g.free_count();
    ExactResult res;
    res.marginal_vertices = g.free_vertices();

    // Pass 1: the running maximum, for a stable log-sum-exp shift.
    double lw_max = neg_inf;
    enumerate(sys, g, cap, [&](std::uint64_t, double lw) { lw_max = std::max(lw_max, lw); });
    if (lw_max == neg_inf) throw NumericError("partition function is zero: every configuration forbidden");

    // Pass 2: shifted sums, total and per free vertex restricted to spin +.
    double total = 0.0;
    std::vector<double> plus_mass(static_cast<size_t>(k), 0.0);
    enumerate(sys, g, cap, [&](std::uint64_t mask, double lw) {
        if (lw == neg_inf) return;
        double w = std::exp(lw - lw_max);
        total += w;
        for (int j = 0; j < k; ++j)
            if ((mask >> j) & 1) plus_mass[static_cast<size_t>(j)] += w;
    });

    res.log_Z = lw_max + std::log(total);
    res.marginals.resize(static_cast<size_t>(k));
    for (int j = 0; j < k; ++j) res.marginals[static_cast<size_t>(j)] = plus_mass[static_cast<size_t>(j)] / total;
    return res;
}

double exact_partition(const SpinSystem& sys, const Graph& g, int cap) {
    double lw_max = neg_inf;
    enumerate(sys, g, cap, [&](std::uint64_t, double lw) { lw_max = std::max(lw_max, lw); });
    if (lw_max == neg_inf) throw NumericError("partition function is zero: every configuration forbidden");
    double total = 0.0;
    enumerate(sys, g, cap, [&](std::uint64_t, double lw) {
        if (lw != neg_inf) total += std::exp(lw - lw_max);
    });
    return lw_max + std::log(total);
}

double exact_marginal(const SpinSystem& sys, const Graph& g, int v, int cap) {
    if (g.pinned(v)) throw InputError("marginal requested for pinned vertex " + std::to_string(v));
    ExactResult res = exact_all(sys, g, cap);
    for (size_t j = 0; j < res.marginal_vertices.size(); ++j)
        if (res.marginal_vertices[j] == v) return res.marginals[j];
    throw InputError("vertex not found");  // unreachable: v is free
}

}  // namespace spintree
