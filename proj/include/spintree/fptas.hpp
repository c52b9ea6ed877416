#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "spintree/model.hpp"
#include "spintree/recursion.hpp"
#include "spintree/sawtree.hpp"

namespace spintree {

// Certification: the instance is approximable when, at the effective arity d
// and Ising edge activity beta', every vertex's activity lies strictly inside
// the uniqueness region of the d-ary tree. Vertices are grouped by degree
// (the per-vertex activity depends only on deg(v)).

struct DegreeRecord {
    int degree = 0;
    double lambda_v = 0;                       // lambda * (gamma/beta)^(degree/2)
    double abs_log_lambda = 0;                 // |log lambda_v|
    std::optional<double> log_lambda_c;        // none: unique for every activity
    bool in_region = false;
    double margin = 0;                         // |log lambda_v| - log lambda_c (+inf when none)
    double fp_margin = 0;                      // f'(x*) + 1 at this activity
    double contraction = 0;                    // |f'(x*)|
};

struct Certificate {
    double beta_prime = 0;
    int d = 0;  // effective tree arity: 1 for max degree <= 1, else max(2, max_degree - 1)
    MessageConstants mc{};
    double L1 = 0, L2 = 0;
    std::vector<DegreeRecord> per_degree;  // ascending degree
    double contraction_c = 0;              // max over records
    bool ok = false;
    bool near_boundary = false;  // some margin < 1e-6: depth may be impractical

    std::vector<int> failing_degrees() const;
};

// Requires a soft anti-ferromagnetic system; other regimes raise
// UnsupportedRegimeError.
Certificate certify(const SpinSystem& sys, const Graph& g);

// Vertices whose degree class fails the certificate (for error reports).
std::vector<int> failing_vertices(const Certificate& cert, const Graph& g);

struct MarginalRun {
    MarginalInterval interval;
    int depth = 0;
    std::uint64_t nodes = 0;
};

// Enclosure of the occupation probability of v with width <= epsilon, via the
// walk tree at the depth the decay envelope prescribes. The returned width
// also satisfies the envelope L1*L2*c^depth itself: the walk tree's root keeps
// its full degree (one more child than the envelope's branching models), so
// shallow evaluations occasionally deepen by an extra level or two. Refuses
// when the certificate is not ok; throws on a pinned v.
MarginalRun approx_marginal_run(const SpinSystem& sys, const Graph& g, int v,
                                double epsilon,
                                const Certificate* cert = nullptr,
                                const SawOptions& opts = {});

MarginalInterval approx_marginal(const SpinSystem& sys, const Graph& g, int v,
                                 double epsilon);

struct ZEstimate {
    double log_Z_hat = 0;
    // |Z_hat/Z - 1| is at most this (from the per-vertex enclosures); at most
    // the requested epsilon by construction.
    double relative_error_bound = 0;
    int depth_used = 0;  // max over telescoped marginals
    std::uint64_t nodes_visited = 0;

    std::vector<int> vertices;               // telescoping order (free, ascending)
    std::vector<MarginalInterval> marginals; // conditional-marginal enclosures
};

// Telescoping estimator: anchor on the configuration extending the input pins
// with '+' everywhere, divide out the conditional marginals estimated on
// successively pinned graphs. epsilon in (0,1).
ZEstimate approx_partition(const SpinSystem& sys, const Graph& g, double epsilon,
                           const SawOptions& opts = {});

}  // namespace spintree
