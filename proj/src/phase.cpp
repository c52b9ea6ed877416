#include "spintree/phase.hpp"

#include <cmath>

#include "spintree/errors.hpp"

namespace spintree {

namespace {

double zero_field_margin(int d, double beta) {
    // x* = 1/2 exactly at lambda = 1, so the margin is available in closed form.
    return 1.0 - d * (1.0 - beta) / (1.0 + beta);
}

double margin_at(int d, double beta, double log_lambda) {
    TreeParams p(d, beta, std::exp(log_lambda));
    return fixed_point(p, message_constants(d, beta)).margin;
}

}  // namespace

std::vector<PhasePoint> lambda_c_curve(int d, std::span<const double> beta_grid) {
    if (d < 2) throw InputError("curve requires arity >= 2");
    std::vector<PhasePoint> out;
    out.reserve(beta_grid.size());
    for (double beta : beta_grid) {
        if (!(beta > 0.0 && beta < 1.0))
            throw InputError("grid value outside (0,1): " + std::to_string(beta));
        PhasePoint pt;
        pt.d = d;
        pt.beta = beta;
        pt.boundary = std::abs(zero_field_margin(d, beta)) <= 1e-12;
        try {
            if (auto lc = critical_lambda(d, beta)) pt.log_lambda_c = std::log(*lc);
        } catch (const NumericError& e) {
            pt.failed = true;
            pt.error = e.what();
        }
        out.push_back(std::move(pt));
    }
    return out;
}

double uniqueness_beta_crossing(int d, double tol) {
    if (d < 2) throw InputError("crossing requires arity >= 2");
    if (!(tol > 0.0)) throw InputError("tolerance must be positive");
    double lo = 0.01, hi = 0.99;
    double mlo = margin_at(d, lo, 0.0), mhi = margin_at(d, hi, 0.0);
    if (!(mlo < 0.0 && mhi > 0.0))
        throw NumericError("zero-field margin does not change sign on beta in [0.01, 0.99]");
    while (hi - lo > tol) {
        double mid = 0.5 * (lo + hi);
        if (margin_at(d, mid, 0.0) < 0.0) lo = mid;
        else hi = mid;
    }
    return 0.5 * (lo + hi);
}

DecayTrace decay_rate_estimate(const TreeParams& p, const MessageConstants& mc,
                               int levels) {
    if (levels < 2) throw InputError("need at least two levels");
    DecayTrace tr;
    tr.p_plus.reserve(static_cast<size_t>(levels));
    tr.p_minus.reserve(static_cast<size_t>(levels));
    double xp = f_fn(1.0, p);  // frontier all '+': every leaf marginal is 1
    double xm = f_fn(0.0, p);  // frontier all '-'
    for (int i = 0; i < levels; ++i) {
        tr.p_plus.push_back(xp);
        tr.p_minus.push_back(xm);
        tr.gap.push_back(std::abs(phi(xp, mc) - phi(xm, mc)));
        xp = f_fn(xp, p);
        xm = f_fn(xm, p);
    }
    for (int i = 1; i < levels; ++i)
        tr.ratio.push_back(tr.gap[static_cast<size_t>(i)] / tr.gap[static_cast<size_t>(i - 1)]);
    return tr;
}

int count_two_step_fixed_points(const TreeParams& p, int grid_points) {
    if (grid_points < 2) throw InputError("grid too small");
    auto val = [&](double x) { return f_fn(f_fn(x, p), p) - x; };
    int count = 0;
    double prev = val(0.0);
    if (prev == 0.0) ++count;
    for (int i = 1; i <= grid_points; ++i) {
        double x = static_cast<double>(i) / grid_points;
        double cur = val(x);
        if (cur == 0.0) {
            ++count;
        } else if (prev * cur < 0.0) {
            // refine the bracketed root before counting it
            double lo = static_cast<double>(i - 1) / grid_points, hi = x;
            double vlo = prev;
            for (int it = 0; it < 100 && hi - lo > 1e-13; ++it) {
                double mid = 0.5 * (lo + hi);
                double vm = val(mid);
                if (vm == 0.0) break;
                if (vlo * vm < 0.0) hi = mid;
                else { lo = mid; vlo = vm; }
            }
            ++count;
        }
        prev = cur;
    }
    return count;
}

}  // namespace spintree
