#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "spintree/recursion.hpp"

namespace spintree {

// Phase-diagram sweeps and empirical decay-rate measurement on d-ary trees.

struct PhasePoint {
    int d = 0;
    double beta = 0;
    std::optional<double> log_lambda_c;  // none: unique for all activities
    bool boundary = false;  // zero-field point sits on the uniqueness boundary
    bool failed = false;
    std::string error;
};

// critical_lambda per grid point; solver failures mark the point failed and
// the sweep continues.
std::vector<PhasePoint> lambda_c_curve(int d, std::span<const double> beta_grid);

// The edge activity where the zero-field fixed point crosses the uniqueness
// boundary (where the critical-activity curve meets the axis), located by
// bisection on the sign of f'(x*)+1 at lambda = 1.
double uniqueness_beta_crossing(int d, double tol = 1e-9);

// Gap between the all-plus and all-minus boundary iterates in message space,
// level by level: p+_1 = f(1), p-_1 = f(0), then both advance through f.
// gap[i] = |phi(p+_{i+1}) - phi(p-_{i+1})|; ratio[i] = gap[i+1]/gap[i].
struct DecayTrace {
    std::vector<double> p_plus;
    std::vector<double> p_minus;
    std::vector<double> gap;
    std::vector<double> ratio;  // size = levels - 1
};

DecayTrace decay_rate_estimate(const TreeParams& p, const MessageConstants& mc,
                               int levels);

// Fixed points of the two-step recursion f(f(x)) = x located by a uniform
// sign-change scan plus bisection refinement: 1 in the uniqueness interior,
// 3 in the strict non-uniqueness region.
int count_two_step_fixed_points(const TreeParams& p, int grid_points = 10'000);

}  // namespace spintree
