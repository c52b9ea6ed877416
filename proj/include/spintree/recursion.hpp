#pragma once

#include <optional>
#include <span>

#include "spintree/errors.hpp"

namespace spintree {

// Scalar and vector tree-recursion machinery for the anti-ferromagnetic Ising
// model on a d-ary tree: the one-step recursion f, the message function phi
// reshaping it into a contraction, closed-form derivatives, fixed points, the
// uniqueness test, and the critical vertex activity.

struct TreeParams {
    int d;          // arity
    double beta;    // Ising edge activity in (0,1)
    double lambda;  // vertex activity > 0

    TreeParams(int d, double beta, double lambda);
};

// Constants defining the message phi(x) = log((x+D)/(1-x+D)) and its Lipschitz
// data: L1 = max phi' (attained at x in {0,1}), L2 = max of the inverse map's
// derivative (attained at x = 1/2).
struct MessageConstants {
    double A;   // d(1-b^2) + (1-b)^2
    double D;   // (sqrt(A+4b) - sqrt(A)) / (2 sqrt(A));  A*D*(1+D) = b
    double L1;  // 1/D + 1/(1+D)
    double L2;  // (1+2D)/4
};

MessageConstants message_constants(int d, double beta);

// h(x) = (b + (1-b)x) / (1 - (1-b)x): increasing, h(0)=b, h(1)=1/b, h(1/2)=1.
double h_fn(double x, double beta);
// inverse of h on [b, 1/b]
double h_inv(double u, double beta);

// f(x) = 1 / (1 + lambda * h(x)^d): the d-ary recursion, strictly decreasing.
double f_fn(double x, const TreeParams& p);

// Multi-child form with per-node activity: 1 / (1 + lambda_v * prod h(x_i)).
// Antitone in every coordinate; a child at 1/2 is a no-op (h(1/2) = 1).
double F_fn(std::span<const double> children, double beta, double lambda_v);

double phi(double x, const MessageConstants& mc);
double phi_prime(double x, const MessageConstants& mc);
// inverse of phi; y must lie in [phi(0), phi(1)]
double psi(double y, const MessageConstants& mc);

// summand of the gradient bound: x(1-x) / (b + (1-b)^2 x(1-x))
double j_term(double x, double beta);

// g = phi . f . psi, the recursion in message coordinates, plus closed-form
// first and second derivatives.
double g_fn(double y, const TreeParams& p, const MessageConstants& mc);
double g_prime(double y, const TreeParams& p, const MessageConstants& mc);
double g_double_prime(double y, const TreeParams& p, const MessageConstants& mc);

// The five building-block derivative identities behind g' and g'', evaluated
// at a point x in (0,1).
struct DerivativeIdentities {
    double phi2_over_phi1;  // A(2x-1) / (b + A x(1-x))
    double h1_over_h;       // (1-b^2) / (b + (1-b)^2 x(1-x))
    double h2_over_h1;      // 2(1-b) / (1 - (1-b)x)
    double f1;              // -d f(1-f) h'/h
    double f2_over_f1;      // f'(1-2f)/(f(1-f)) + h''/h' - h'/h
};

DerivativeIdentities d1_identities(double x, const TreeParams& p, const MessageConstants& mc);

// Vectorized recursion in message coordinates over exactly d children, and the
// l1 norm of its gradient in closed form.
double G_fn(std::span<const double> y, const TreeParams& p, const MessageConstants& mc);
double grad_G_l1(std::span<const double> y, const TreeParams& p, const MessageConstants& mc);

struct FixedPointReport {
    double x_star;            // fixed point of f
    double p_star;            // phi(x_star), fixed point of g
    double f_prime_at_star;   // < 0
    double contraction_c;     // |f'(x_star)| = |g'(p_star)|
    double margin;            // f_prime_at_star + 1
    bool in_uniqueness_interior;  // margin > 0 strictly
};

// Bisection on f(x) - x over the certified bracket [f(1), f(0)], absolute
// tolerance 1e-13.
FixedPointReport fixed_point(const TreeParams& p, const MessageConstants& mc);

struct UniquenessVerdict {
    bool interior;
    double margin;  // f'(x*) + 1
};

UniquenessVerdict uniqueness_check(const TreeParams& p, const MessageConstants& mc,
                                   double margin_floor = 1e-9);

// Critical vertex activity: the lambda >= 1 where f'(x*) crosses -1, none when
// the zero-field point is already strictly contracting (then every lambda is).
// Bisection on log lambda in [0, 50] with doubling bracket expansion, tolerance
// 1e-10; a 10^4-point scan is the fallback when the bracket shows no sign
// change (monotonicity is not assumed).
std::optional<double> critical_lambda(int d, double beta);

// ratio form of a marginal: (1-p)/p, +inf at p = 0
double r_from_p(double p);

}  // namespace spintree
