#include "spintree/recursion.hpp"

#include <cmath>
#include <limits>
#include <string>
#include <vector>

namespace spintree {

TreeParams::TreeParams(int d_, double beta_, double lambda_)
    : d(d_), beta(beta_), lambda(lambda_) {
    if (d < 1) throw InputError("tree arity must be >= 1");
    if (!(beta > 0.0 && beta < 1.0))
        throw InputError("edge activity must lie strictly in (0,1)");
    if (!(lambda > 0.0) || !std::isfinite(lambda))
        throw InputError("vertex activity must be finite and positive");
}

MessageConstants message_constants(int d, double beta) {
    if (d < 1) throw InputError("tree arity must be >= 1");
    if (!(beta > 0.0 && beta < 1.0))
        throw InputError("edge activity must lie strictly in (0,1)");
    MessageConstants mc;
    mc.A = d * (1.0 - beta * beta) + (1.0 - beta) * (1.0 - beta);
    double sA = std::sqrt(mc.A);
    mc.D = (std::sqrt(mc.A + 4.0 * beta) - sA) / (2.0 * sA);
    mc.L1 = 1.0 / mc.D + 1.0 / (1.0 + mc.D);
    mc.L2 = (1.0 + 2.0 * mc.D) / 4.0;
    return mc;
}

double h_fn(double x, double beta) {
    return (beta + (1.0 - beta) * x) / (1.0 - (1.0 - beta) * x);
}

double h_inv(double u, double beta) {
    return (u - beta) / ((1.0 - beta) * (1.0 + u));
}

double f_fn(double x, const TreeParams& p) {
    return 1.0 / (1.0 + p.lambda * std::pow(h_fn(x, p.beta), p.d));
}

double F_fn(std::span<const double> children, double beta, double lambda_v) {
    double prod = 1.0;
    for (double x : children) prod *= h_fn(x, beta);
    return 1.0 / (1.0 + lambda_v * prod);
}

double phi(double x, const MessageConstants& mc) {
    return std::log((x + mc.D) / (1.0 - x + mc.D));
}

double phi_prime(double x, const MessageConstants& mc) {
    return (1.0 + 2.0 * mc.D) / ((x + mc.D) * (1.0 - x + mc.D));
}

double psi(double y, const MessageConstants& mc) {
    double hi = phi(1.0, mc);  // range is symmetric: phi(0) = -phi(1)
    if (!(std::abs(y) <= hi * (1.0 + 1e-12) + 1e-12))
        throw DomainError("message value " + std::to_string(y) +
                          " outside [phi(0), phi(1)] = [" + std::to_string(-hi) + ", " +
                          std::to_string(hi) + "]");
    double ey = std::exp(y);
    double x = (ey * (1.0 + mc.D) - mc.D) / (1.0 + ey);
    return std::min(1.0, std::max(0.0, x));
}

double j_term(double x, double beta) {
    double s = x * (1.0 - x);
    return s / (beta + (1.0 - beta) * (1.0 - beta) * s);
}

double g_fn(double y, const TreeParams& p, const MessageConstants& mc) {
    return phi(f_fn(psi(y, mc), p), mc);
}

DerivativeIdentities d1_identities(double x, const TreeParams& p, const MessageConstants& mc) {
    const double b = p.beta;
    const double s = x * (1.0 - x);
    DerivativeIdentities id;
    id.phi2_over_phi1 = mc.A * (2.0 * x - 1.0) / (b + mc.A * s);
    id.h1_over_h = (1.0 - b * b) / (b + (1.0 - b) * (1.0 - b) * s);
    id.h2_over_h1 = 2.0 * (1.0 - b) / (1.0 - (1.0 - b) * x);
    double f = f_fn(x, p);
    id.f1 = -p.d * f * (1.0 - f) * id.h1_over_h;
    id.f2_over_f1 = id.f1 * (1.0 - 2.0 * f) / (f * (1.0 - f)) + id.h2_over_h1 - id.h1_over_h;
    return id;
}

double g_prime(double y, const TreeParams& p, const MessageConstants& mc) {
    double alpha = psi(y, mc);
    double eta = f_fn(alpha, p);
    DerivativeIdentities id = d1_identities(alpha, p, mc);
    return phi_prime(eta, mc) / phi_prime(alpha, mc) * id.f1;
}

double g_double_prime(double y, const TreeParams& p, const MessageConstants& mc) {
    const double b = p.beta;
    const double A = mc.A;
    double alpha = psi(y, mc);
    double eta = f_fn(alpha, p);
    double sa = alpha * (1.0 - alpha);
    double se = eta * (1.0 - eta);
    double gp = g_prime(y, p, mc);
    double psi1 = 1.0 / phi_prime(alpha, mc);
    double num = (eta - alpha) * gp * psi1 * p.d * b * (1.0 - b * b) *
                 (2.0 * b + A * alpha * eta + A * (1.0 - alpha) * (1.0 - eta));
    double den = (b + (1.0 - b) * (1.0 - b) * sa) * (b + A * se) * (b + A * sa);
    return num / den;
}

double G_fn(std::span<const double> y, const TreeParams& p, const MessageConstants& mc) {
    if (static_cast<int>(y.size()) != p.d)
        throw InputError("G expects exactly d coordinates");
    double prod = 1.0;
    for (double yi : y) prod *= h_fn(psi(yi, mc), p.beta);
    return phi(1.0 / (1.0 + p.lambda * prod), mc);
}

double grad_G_l1(std::span<const double> y, const TreeParams& p, const MessageConstants& mc) {
    if (static_cast<int>(y.size()) != p.d)
        throw InputError("G expects exactly d coordinates");
    const double b = p.beta;
    const double A = mc.A;
    double prod = 1.0;
    std::vector<double> alpha(y.size());
    for (size_t i = 0; i < y.size(); ++i) {
        alpha[i] = psi(y[i], mc);
        prod *= h_fn(alpha[i], b);
    }
    double eta = 1.0 / (1.0 + p.lambda * prod);
    double base = eta * (1.0 - eta) * (1.0 - b * b) / (b + A * eta * (1.0 - eta));
    double total = 0.0;
    for (double a : alpha) {
        double sa = a * (1.0 - a);
        total += base * (b + A * sa) / (b + (1.0 - b) * (1.0 - b) * sa);
    }
    return total;
}

FixedPointReport fixed_point(const TreeParams& p, const MessageConstants& mc) {
    double lo = f_fn(1.0, p);
    double hi = f_fn(0.0, p);
    // f strictly decreasing: f(x) - x is positive at lo, negative at hi.
    for (int it = 0; it < 200 && hi - lo > 1e-13; ++it) {
        double mid = 0.5 * (lo + hi);
        if (f_fn(mid, p) - mid > 0.0) lo = mid;
        else hi = mid;
    }
    FixedPointReport rep;
    rep.x_star = 0.5 * (lo + hi);
    rep.p_star = phi(rep.x_star, mc);
    rep.f_prime_at_star = d1_identities(rep.x_star, p, mc).f1;
    rep.contraction_c = std::abs(rep.f_prime_at_star);
    rep.margin = rep.f_prime_at_star + 1.0;
    rep.in_uniqueness_interior = rep.margin > 0.0;
    return rep;
}

UniquenessVerdict uniqueness_check(const TreeParams& p, const MessageConstants& mc,
                                   double margin_floor) {
    FixedPointReport rep = fixed_point(p, mc);
    return UniquenessVerdict{rep.margin > margin_floor, rep.margin};
}

namespace {

// f'(x*) + 1 as a function of log(lambda), >0 strictly inside uniqueness.
double contraction_margin(int d, double beta, double log_lambda) {
    TreeParams p(d, beta, std::exp(log_lambda));
    return fixed_point(p, message_constants(d, beta)).margin;
}

}  // namespace

std::optional<double> critical_lambda(int d, double beta) {
    if (d < 1) throw InputError("tree arity must be >= 1");
    if (!(beta > 0.0 && beta < 1.0))
        throw InputError("edge activity must lie strictly in (0,1)");
    // At lambda = 1 the fixed point is exactly 1/2, so the margin has the
    // closed form 1 - d(1-beta)/(1+beta); its sign decides everything.
    double m0 = 1.0 - d * (1.0 - beta) / (1.0 + beta);
    if (m0 > 1e-12) return std::nullopt;  // contracting for every field
    if (m0 >= -1e-12) return 1.0;         // the threshold sits at zero field

    constexpr double log_cap = 50.0;
    double lo = 0.0, hi = 1.0;
    while (hi < log_cap && contraction_margin(d, beta, hi) <= 0.0)
        hi = std::min(log_cap, 2.0 * hi);
    if (contraction_margin(d, beta, hi) <= 0.0) {
        // Doubling found no sign change; sweep the whole range before giving up.
        constexpr int scan_points = 10'000;
        double prev = m0;
        for (int i = 1; i <= scan_points; ++i) {
            double t = log_cap * i / scan_points;
            double m = contraction_margin(d, beta, t);
            if (prev <= 0.0 && m > 0.0) {
                lo = log_cap * (i - 1) / scan_points;
                hi = t;
                break;
            }
            prev = m;
        }
        if (contraction_margin(d, beta, hi) <= 0.0)
            throw NumericError("no contraction threshold found for log(lambda) in [0, " +
                               std::to_string(log_cap) + "] at d=" + std::to_string(d) +
                               ", beta=" + std::to_string(beta));
    }
    while (hi - lo > 1e-10) {
        double mid = 0.5 * (lo + hi);
        if (contraction_margin(d, beta, mid) <= 0.0) lo = mid;
        else hi = mid;
    }
    return std::exp(0.5 * (lo + hi));
}

double r_from_p(double p) {
    if (!(p >= 0.0 && p <= 1.0)) throw InputError("probability outside [0,1]");
    if (p == 0.0) return std::numeric_limits<double>::infinity();
    return (1.0 - p) / p;
}

}  // namespace spintree
