#include "spintree/fptas.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

#include "spintree/errors.hpp"

namespace spintree {

std::vector<int> Certificate::failing_degrees() const {
    std::vector<int> out;
    for (const auto& rec : per_degree)
        if (!rec.in_region) out.push_back(rec.degree);
    return out;
}

namespace {

int effective_arity(const Graph& g) {
    int md = g.max_degree();
    return md <= 1 ? 1 : std::max(2, md - 1);
}

std::string failing_report(const Certificate& cert, const Graph& g) {
    std::ostringstream os;
    os << "instance not certified: activity outside the uniqueness region for degree";
    auto bad = cert.failing_degrees();
    for (size_t i = 0; i < bad.size(); ++i) os << (i ? "," : "") << " " << bad[i];
    os << " (vertices";
    int listed = 0;
    for (int v : failing_vertices(cert, g)) {
        if (listed == 8) {
            os << " ...";
            break;
        }
        os << " " << v;
        ++listed;
    }
    os << ")";
    return os.str();
}

}  // namespace

Certificate certify(const SpinSystem& sys, const Graph& g) {
    if (classify(sys) != Regime::antiferro_soft)
        throw UnsupportedRegimeError(
            std::string("certification requires a soft anti-ferromagnetic system, got ") +
            regime_name(classify(sys)));

    Certificate cert;
    cert.beta_prime = std::sqrt(sys.beta * sys.gamma);
    cert.d = effective_arity(g);
    cert.mc = message_constants(cert.d, cert.beta_prime);
    cert.L1 = cert.mc.L1;
    cert.L2 = cert.mc.L2;

    std::optional<double> lambda_c = critical_lambda(cert.d, cert.beta_prime);
    std::optional<double> log_lc;
    if (lambda_c) log_lc = std::log(*lambda_c);

    std::map<int, int> degrees;  // degree -> representative count (ordering only)
    for (int v = 0; v < g.vertex_count(); ++v) ++degrees[g.degree(v)];

    double log_ratio = std::log(sys.gamma) - std::log(sys.beta);
    cert.ok = true;
    cert.contraction_c = 0.0;
    for (const auto& [deg, count] : degrees) {
        DegreeRecord rec;
        rec.degree = deg;
        rec.lambda_v = sys.lambda * std::exp(0.5 * log_ratio * deg);
        rec.abs_log_lambda = std::abs(std::log(rec.lambda_v));
        rec.log_lambda_c = log_lc;
        rec.margin = log_lc ? rec.abs_log_lambda - *log_lc
                            : std::numeric_limits<double>::infinity();
        FixedPointReport fp =
            fixed_point(TreeParams(cert.d, cert.beta_prime, rec.lambda_v), cert.mc);
        rec.fp_margin = fp.margin;
        rec.contraction = fp.contraction_c;
        rec.in_region = log_lc ? (rec.margin > 0.0 && rec.fp_margin > 0.0)
                               : rec.fp_margin > 0.0;
        cert.ok = cert.ok && rec.in_region;
        cert.contraction_c = std::max(cert.contraction_c, rec.contraction);
        if (rec.margin < 1e-6 || rec.fp_margin < 1e-6) cert.near_boundary = true;
        cert.per_degree.push_back(rec);
    }
    return cert;
}

std::vector<int> failing_vertices(const Certificate& cert, const Graph& g) {
    auto bad = cert.failing_degrees();
    std::vector<int> out;
    for (int v = 0; v < g.vertex_count(); ++v)
        if (std::find(bad.begin(), bad.end(), g.degree(v)) != bad.end()) out.push_back(v);
    return out;
}

MarginalRun approx_marginal_run(const SpinSystem& sys, const Graph& g, int v,
                                double epsilon, const Certificate* cert,
                                const SawOptions& opts) {
    if (!(epsilon > 0.0)) throw InputError("epsilon must be positive");
    Certificate own;
    if (!cert) {
        own = certify(sys, g);
        cert = &own;
    }
    if (!cert->ok) throw UnsupportedRegimeError(failing_report(*cert, g));
    if (g.pinned(v)) throw InputError("marginal requested for pinned vertex " + std::to_string(v));

    const IsingView view = to_ising(sys, g);
    const double c = cert->contraction_c;
    const int full = full_saw_depth(g);

    int depth;
    try {
        depth = required_depth(epsilon, c, cert->L1, cert->L2);
    } catch (const NumericError&) {
        depth = full;  // envelope depth beyond the cap: full depth is exact anyway
    }
    depth = std::min(depth, full);

    MarginalRun run;
    run.nodes = 0;
    // The envelope L1*L2*c^l models a d-ary tree; the walk tree's root keeps
    // degree up to d+1, so the first evaluation can come out slightly wider.
    // Deepening restores the guarantee; at full depth the width is zero.
    for (;; ++depth) {
        SawEvaluation ev = eval_saw_interval(view, g, v, depth, opts);
        run.nodes += ev.nodes;
        double w = ev.interval.width();
        if ((w <= epsilon && w <= cert->L1 * cert->L2 * std::pow(c, depth)) || depth >= full) {
            run.interval = ev.interval;
            run.depth = depth;
            return run;
        }
    }
}

MarginalInterval approx_marginal(const SpinSystem& sys, const Graph& g, int v,
                                 double epsilon) {
    return approx_marginal_run(sys, g, v, epsilon).interval;
}

ZEstimate approx_partition(const SpinSystem& sys, const Graph& g, double epsilon,
                           const SawOptions& opts) {
    if (!(epsilon > 0.0 && epsilon < 1.0)) throw InputError("epsilon must lie in (0,1)");
    Certificate cert = certify(sys, g);
    if (!cert.ok) throw UnsupportedRegimeError(failing_report(cert, g));

    const int n = g.vertex_count();
    const double bp = cert.beta_prime;
    const double log_ratio = std::log(sys.gamma) - std::log(sys.beta);

    // Anchor configuration: the input pins extended by '+' everywhere else.
    Configuration all_plus(static_cast<size_t>(n), Spin::plus);
    for (int v = 0; v < n; ++v)
        if (auto p = g.pin(v)) all_plus[static_cast<size_t>(v)] = *p;
    double anchor = log_weight(sys, g, all_plus);

    ZEstimate est;
    est.vertices = g.free_vertices();

    Graph pinned = g;
    double log_prod = 0.0;
    double log_err = 0.0;
    for (int v : est.vertices) {
        double lambda_v = sys.lambda * std::exp(0.5 * log_ratio * g.degree(v));
        // F(1,...,1): conditional marginals can never fall below this.
        double p_lb = 1.0 / (1.0 + lambda_v * std::pow(bp, -g.degree(v)));
        double delta = epsilon * p_lb / (4.0 * n);
        MarginalRun run = approx_marginal_run(sys, pinned, v, delta, &cert, opts);
        double p_hat = run.interval.mid();
        log_prod += std::log(p_hat);
        log_err += std::max(std::log(p_hat / run.interval.lo),
                            std::log(run.interval.hi / p_hat));
        est.marginals.push_back(run.interval);
        est.depth_used = std::max(est.depth_used, run.depth);
        est.nodes_visited += run.nodes;
        pinned = pinned.with_pin(v, Spin::plus);
    }
    est.log_Z_hat = anchor - log_prod;
    est.relative_error_bound = std::expm1(log_err);
    return est;
}

}  // namespace spintree
