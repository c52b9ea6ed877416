// Command-line surface over the library: exact enumeration, certified
// approximation, phase sweeps, decay traces, and a seeded graph generator.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "spintree/errors.hpp"
#include "spintree/fptas.hpp"
#include "spintree/graph.hpp"
#include "spintree/model.hpp"
#include "spintree/oracle.hpp"
#include "spintree/phase.hpp"
#include "spintree/recursion.hpp"
#include "spintree/sawtree.hpp"

namespace {

using namespace spintree;

std::string num(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

// JSON value: bare number when finite, quoted token otherwise.
std::string jnum(double x) {
    if (std::isfinite(x)) return num(x);
    return x > 0 ? "\"inf\"" : (x < 0 ? "\"-inf\"" : "\"nan\"");
}

enum class Format { human, csv, jsonl };

struct Common {
    std::string graph_path;
    double beta = 0, gamma = 0, lambda = 0;
    Format format = Format::human;
};

void add_format_flag(CLI::App* sub, Format& fmt) {
    sub->add_option("--format", fmt, "output format")
        ->transform(CLI::CheckedTransformer(
            std::map<std::string, Format>{{"human", Format::human},
                                          {"csv", Format::csv},
                                          {"json-lines", Format::jsonl}}))
        ->default_str("human");
}

void add_system_flags(CLI::App* sub, Common& c) {
    sub->add_option("--beta", c.beta, "(+,+) edge activity")->required();
    sub->add_option("--gamma", c.gamma, "(-,-) edge activity")->required();
    sub->add_option("--lambda", c.lambda, "vertex activity for spin -")->required();
}

void add_graph_flag(CLI::App* sub, Common& c) {
    sub->add_option("--graph", c.graph_path, "graph file")->required();
}

int exit_code = 0;  // callbacks may raise it (certify: 3, compare: 4)

void run_exact(const Common& c) {
    SpinSystem sys(c.beta, c.gamma, c.lambda);
    Graph g = parse_graph_file(c.graph_path);
    ExactResult res = exact_all(sys, g);
    switch (c.format) {
        case Format::human:
            std::cout << "log_Z = " << num(res.log_Z) << "\n";
            for (size_t i = 0; i < res.marginal_vertices.size(); ++i)
                std::cout << "marginal[" << res.marginal_vertices[i]
                          << "] = " << num(res.marginals[i]) << "\n";
            break;
        case Format::csv:
            std::cout << "quantity,vertex,value\n";
            std::cout << "log_Z,," << num(res.log_Z) << "\n";
            for (size_t i = 0; i < res.marginal_vertices.size(); ++i)
                std::cout << "marginal," << res.marginal_vertices[i] << ","
                          << num(res.marginals[i]) << "\n";
            break;
        case Format::jsonl:
            std::cout << "{\"log_Z\":" << jnum(res.log_Z) << "}\n";
            for (size_t i = 0; i < res.marginal_vertices.size(); ++i)
                std::cout << "{\"vertex\":" << res.marginal_vertices[i]
                          << ",\"marginal\":" << jnum(res.marginals[i]) << "}\n";
            break;
    }
}

void run_partition(const Common& c, double eps) {
    SpinSystem sys(c.beta, c.gamma, c.lambda);
    Graph g = parse_graph_file(c.graph_path);
    ZEstimate est = approx_partition(sys, g, eps);
    switch (c.format) {
        case Format::human:
            std::cout << "log_Z_hat = " << num(est.log_Z_hat) << "\n"
                      << "relative_error_bound = " << num(est.relative_error_bound) << "\n"
                      << "depth_used = " << est.depth_used << "\n"
                      << "nodes_visited = " << est.nodes_visited << "\n";
            break;
        case Format::csv:
            std::cout << "quantity,value\n"
                      << "log_Z_hat," << num(est.log_Z_hat) << "\n"
                      << "relative_error_bound," << num(est.relative_error_bound) << "\n"
                      << "depth_used," << est.depth_used << "\n"
                      << "nodes_visited," << est.nodes_visited << "\n";
            break;
        case Format::jsonl:
            std::cout << "{\"log_Z_hat\":" << jnum(est.log_Z_hat)
                      << ",\"relative_error_bound\":" << jnum(est.relative_error_bound)
                      << ",\"depth_used\":" << est.depth_used
                      << ",\"nodes_visited\":" << est.nodes_visited << "}\n";
            break;
    }
}

void run_marginal(const Common& c, int v, double eps, int depth_override) {
    SpinSystem sys(c.beta, c.gamma, c.lambda);
    Graph g = parse_graph_file(c.graph_path);
    MarginalInterval iv;
    int depth;
    std::uint64_t nodes;
    if (depth_override >= 0) {
        // raw truncated evaluation at a forced depth, no certificate involved
        SawEvaluation ev = eval_saw_interval(to_ising(sys, g), g, v, depth_override);
        iv = ev.interval;
        depth = ev.depth_limit;
        nodes = ev.nodes;
    } else {
        MarginalRun run = approx_marginal_run(sys, g, v, eps);
        iv = run.interval;
        depth = run.depth;
        nodes = run.nodes;
    }
    switch (c.format) {
        case Format::human:
            std::cout << "interval = [" << num(iv.lo) << ", " << num(iv.hi) << "]\n"
                      << "midpoint = " << num(iv.mid()) << "\n"
                      << "width = " << num(iv.width()) << "\n"
                      << "depth = " << depth << "\n"
                      << "nodes = " << nodes << "\n";
            break;
        case Format::csv:
            std::cout << "quantity,value\n"
                      << "lo," << num(iv.lo) << "\n"
                      << "hi," << num(iv.hi) << "\n"
                      << "midpoint," << num(iv.mid()) << "\n"
                      << "width," << num(iv.width()) << "\n"
                      << "depth," << depth << "\n"
                      << "nodes," << nodes << "\n";
            break;
        case Format::jsonl:
            std::cout << "{\"lo\":" << jnum(iv.lo) << ",\"hi\":" << jnum(iv.hi)
                      << ",\"midpoint\":" << jnum(iv.mid()) << ",\"width\":" << jnum(iv.width())
                      << ",\"depth\":" << depth << ",\"nodes\":" << nodes << "}\n";
            break;
    }
}

void run_certify(const Common& c) {
    SpinSystem sys(c.beta, c.gamma, c.lambda);
    Graph g = parse_graph_file(c.graph_path);
    Certificate cert = certify(sys, g);
    auto flag = [](bool b) { return b ? "yes" : "no"; };
    switch (c.format) {
        case Format::human:
            std::cout << "beta_prime = " << num(cert.beta_prime) << "\n"
                      << "effective_arity = " << cert.d << "\n"
                      << "L1 = " << num(cert.L1) << "\n"
                      << "L2 = " << num(cert.L2) << "\n";
            for (const auto& r : cert.per_degree) {
                std::cout << "degree " << r.degree << ": lambda_v = " << num(r.lambda_v)
                          << ", |log lambda_v| = " << num(r.abs_log_lambda)
                          << ", log_lambda_c = "
                          << (r.log_lambda_c ? num(*r.log_lambda_c) : std::string("none"))
                          << ", margin = " << num(r.margin)
                          << ", contraction = " << num(r.contraction)
                          << ", in_region = " << flag(r.in_region) << "\n";
            }
            std::cout << "contraction = " << num(cert.contraction_c) << "\n"
                      << "near_boundary = " << flag(cert.near_boundary) << "\n"
                      << "ok = " << flag(cert.ok) << "\n";
            break;
        case Format::csv:
            std::cout << "degree,lambda_v,abs_log_lambda,log_lambda_c,margin,fp_margin,"
                         "contraction,in_region\n";
            for (const auto& r : cert.per_degree)
                std::cout << r.degree << "," << num(r.lambda_v) << "," << num(r.abs_log_lambda)
                          << "," << (r.log_lambda_c ? num(*r.log_lambda_c) : std::string())
                          << "," << num(r.margin) << "," << num(r.fp_margin) << ","
                          << num(r.contraction) << "," << (r.in_region ? 1 : 0) << "\n";
            break;
        case Format::jsonl:
            for (const auto& r : cert.per_degree)
                std::cout << "{\"degree\":" << r.degree << ",\"lambda_v\":" << jnum(r.lambda_v)
                          << ",\"abs_log_lambda\":" << jnum(r.abs_log_lambda)
                          << ",\"log_lambda_c\":"
                          << (r.log_lambda_c ? jnum(*r.log_lambda_c) : std::string("null"))
                          << ",\"margin\":" << jnum(r.margin)
                          << ",\"fp_margin\":" << jnum(r.fp_margin)
                          << ",\"contraction\":" << jnum(r.contraction)
                          << ",\"in_region\":" << (r.in_region ? "true" : "false") << "}\n";
            std::cout << "{\"beta_prime\":" << jnum(cert.beta_prime)
                      << ",\"effective_arity\":" << cert.d
                      << ",\"contraction\":" << jnum(cert.contraction_c)
                      << ",\"near_boundary\":" << (cert.near_boundary ? "true" : "false")
                      << ",\"ok\":" << (cert.ok ? "true" : "false") << "}\n";
            break;
    }
    if (!cert.ok) exit_code = 3;
}

void run_phase(const std::vector<int>& ds, const std::string& grid_spec, Format format) {
    double lo, hi, step;
    if (std::sscanf(grid_spec.c_str(), "%lf:%lf:%lf", &lo, &hi, &step) != 3 || !(step > 0) ||
        !(lo <= hi))
        throw InputError("grid must be lo:hi:step with step > 0 and lo <= hi");
    std::vector<double> grid;
    long k = static_cast<long>((hi - lo) / step + 1e-9);
    for (long i = 0; i <= k; ++i) grid.push_back(lo + static_cast<double>(i) * step);

    if (format == Format::csv) std::cout << "d,beta,log_lambda_c\n";
    for (int d : ds) {
        std::vector<PhasePoint> pts = lambda_c_curve(d, grid);
        for (const PhasePoint& pt : pts) {
            switch (format) {
                case Format::human:
                    std::cout << "d=" << pt.d << " beta=" << num(pt.beta) << " log_lambda_c=";
                    if (pt.failed) std::cout << "failed (" << pt.error << ")";
                    else if (pt.log_lambda_c) std::cout << num(*pt.log_lambda_c);
                    else std::cout << "none";
                    if (pt.boundary) std::cout << " [boundary]";
                    std::cout << "\n";
                    break;
                case Format::csv:
                    std::cout << pt.d << "," << num(pt.beta) << ","
                              << (pt.log_lambda_c ? num(*pt.log_lambda_c) : std::string())
                              << "\n";
                    break;
                case Format::jsonl:
                    std::cout << "{\"d\":" << pt.d << ",\"beta\":" << jnum(pt.beta)
                              << ",\"log_lambda_c\":"
                              << (pt.log_lambda_c ? jnum(*pt.log_lambda_c)
                                                  : std::string("null"))
                              << ",\"boundary\":" << (pt.boundary ? "true" : "false")
                              << ",\"failed\":" << (pt.failed ? "true" : "false") << "}\n";
                    break;
            }
        }
    }
}

void run_decay(int d, double beta, double lambda, int levels, Format format) {
    TreeParams p(d, beta, lambda);
    MessageConstants mc = message_constants(d, beta);
    DecayTrace tr = decay_rate_estimate(p, mc, levels);
    if (format == Format::csv) std::cout << "level,q_plus_minus_gap,ratio\n";
    for (int i = 0; i < levels; ++i) {
        size_t s = static_cast<size_t>(i);
        bool has_ratio = i > 0;
        double ratio = has_ratio ? tr.ratio[s - 1] : 0.0;
        switch (format) {
            case Format::human:
                std::cout << "level=" << (i + 1) << " gap=" << num(tr.gap[s]) << " ratio="
                          << (has_ratio ? num(ratio) : std::string("-")) << "\n";
                break;
            case Format::csv:
                std::cout << (i + 1) << "," << num(tr.gap[s]) << ","
                          << (has_ratio ? num(ratio) : std::string()) << "\n";
                break;
            case Format::jsonl:
                std::cout << "{\"level\":" << (i + 1) << ",\"gap\":" << jnum(tr.gap[s])
                          << ",\"ratio\":" << (has_ratio ? jnum(ratio) : std::string("null"))
                          << "}\n";
                break;
        }
    }
}

void run_compare(const Common& c, double eps) {
    SpinSystem sys(c.beta, c.gamma, c.lambda);
    Graph g = parse_graph_file(c.graph_path);
    double exact = exact_partition(sys, g);
    ZEstimate est = approx_partition(sys, g, eps);
    double rel = std::abs(std::expm1(est.log_Z_hat - exact));
    bool ok = rel <= eps;
    switch (c.format) {
        case Format::human:
            std::cout << "log_Z_exact = " << num(exact) << "\n"
                      << "log_Z_hat = " << num(est.log_Z_hat) << "\n"
                      << "relative_error = " << num(rel) << "\n"
                      << "epsilon = " << num(eps) << "\n"
                      << "within_epsilon = " << (ok ? "yes" : "no") << "\n";
            break;
        case Format::csv:
            std::cout << "quantity,value\n"
                      << "log_Z_exact," << num(exact) << "\n"
                      << "log_Z_hat," << num(est.log_Z_hat) << "\n"
                      << "relative_error," << num(rel) << "\n"
                      << "epsilon," << num(eps) << "\n"
                      << "within_epsilon," << (ok ? 1 : 0) << "\n";
            break;
        case Format::jsonl:
            std::cout << "{\"log_Z_exact\":" << jnum(exact)
                      << ",\"log_Z_hat\":" << jnum(est.log_Z_hat)
                      << ",\"relative_error\":" << jnum(rel) << ",\"epsilon\":" << jnum(eps)
                      << ",\"within_epsilon\":" << (ok ? "true" : "false") << "}\n";
            break;
    }
    if (!ok) exit_code = 4;
}

// Seeded random connected graph: a random attachment tree plus extra edges,
// degree-capped; optional random pins. The seed only affects generation.
void run_gen(int n, int max_degree, int extra_edges, int pins, std::uint64_t seed,
             const std::string& out_path) {
    if (n < 1) throw InputError("need at least one vertex");
    if (max_degree < 1 && n > 1) throw InputError("degree cap too small for a connected graph");
    std::mt19937_64 rng(seed);
    std::vector<int> deg(static_cast<size_t>(n), 0);
    std::vector<std::pair<int, int>> edges;
    auto degree_room = [&](int v) { return deg[static_cast<size_t>(v)] < max_degree; };
    for (int v = 1; v < n; ++v) {
        std::vector<int> candidates;
        for (int u = 0; u < v; ++u)
            if (degree_room(u)) candidates.push_back(u);
        if (candidates.empty())
            throw InputError("degree cap " + std::to_string(max_degree) +
                             " cannot host a connected graph on " + std::to_string(n) +
                             " vertices");
        int u = candidates[std::uniform_int_distribution<size_t>(0, candidates.size() - 1)(rng)];
        edges.emplace_back(u, v);
        ++deg[static_cast<size_t>(u)];
        ++deg[static_cast<size_t>(v)];
    }
    auto has_edge = [&](int a, int b) {
        if (a > b) std::swap(a, b);
        for (auto& [x, y] : edges)
            if (x == a && y == b) return true;
        return false;
    };
    int added = 0;
    for (int attempt = 0; attempt < 50 * std::max(1, extra_edges) && added < extra_edges;
         ++attempt) {
        int a = std::uniform_int_distribution<int>(0, n - 1)(rng);
        int b = std::uniform_int_distribution<int>(0, n - 1)(rng);
        if (a == b || has_edge(a, b) || !degree_room(a) || !degree_room(b)) continue;
        edges.emplace_back(std::min(a, b), std::max(a, b));
        ++deg[static_cast<size_t>(a)];
        ++deg[static_cast<size_t>(b)];
        ++added;
    }
    std::vector<std::pair<int, Spin>> pin_list;
    if (pins > 0) {
        std::vector<int> order(static_cast<size_t>(n));
        for (int v = 0; v < n; ++v) order[static_cast<size_t>(v)] = v;
        std::shuffle(order.begin(), order.end(), rng);
        for (int i = 0; i < pins && i < n; ++i)
            pin_list.emplace_back(order[static_cast<size_t>(i)],
                                  rng() & 1 ? Spin::plus : Spin::minus);
    }
    Graph g(n, std::move(edges), std::move(pin_list));
    std::string text = format_graph(g);
    if (out_path.empty()) {
        std::cout << text;
    } else {
        std::ofstream out(out_path);
        if (!out) throw InputError("cannot open output file: " + out_path);
        out << text;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"two-state spin systems: exact enumeration and certified approximation"};
    app.require_subcommand(1);

    Common c;
    double eps = 1e-3;
    int vertex = 0;
    int depth_override = -1;

    auto* cmd_exact = app.add_subcommand("exact", "brute-force partition function and marginals");
    add_graph_flag(cmd_exact, c);
    add_system_flags(cmd_exact, c);
    add_format_flag(cmd_exact, c.format);
    cmd_exact->callback([&] { run_exact(c); });

    auto* cmd_partition =
        app.add_subcommand("partition", "certified partition-function approximation");
    add_graph_flag(cmd_partition, c);
    add_system_flags(cmd_partition, c);
    cmd_partition->add_option("--eps", eps, "relative error budget in (0,1)")->required();
    add_format_flag(cmd_partition, c.format);
    cmd_partition->callback([&] { run_partition(c, eps); });

    auto* cmd_marginal = app.add_subcommand("marginal", "certified marginal enclosure");
    add_graph_flag(cmd_marginal, c);
    add_system_flags(cmd_marginal, c);
    cmd_marginal->add_option("--v", vertex, "vertex")->required();
    cmd_marginal->add_option("--eps", eps, "enclosure width bound");
    cmd_marginal->add_option("--depth", depth_override,
                             "evaluate the walk tree at this fixed depth instead");
    add_format_flag(cmd_marginal, c.format);
    cmd_marginal->callback([&] { run_marginal(c, vertex, eps, depth_override); });

    auto* cmd_certify = app.add_subcommand("certify", "uniqueness-region certificate");
    add_graph_flag(cmd_certify, c);
    add_system_flags(cmd_certify, c);
    add_format_flag(cmd_certify, c.format);
    cmd_certify->callback([&] { run_certify(c); });

    std::vector<int> ds;
    std::string grid_spec;
    auto* cmd_phase = app.add_subcommand("phase", "critical-activity curves over a beta grid");
    cmd_phase->add_option("--d", ds, "tree arity (repeatable)")->required();
    cmd_phase->add_option("--beta-grid", grid_spec, "lo:hi:step")->required();
    Format phase_fmt = Format::human;
    add_format_flag(cmd_phase, phase_fmt);
    cmd_phase->callback([&] { run_phase(ds, grid_spec, phase_fmt); });

    int decay_d = 2, levels = 40;
    double decay_beta = 0.5, decay_lambda = 1.0;
    auto* cmd_decay = app.add_subcommand("decay", "boundary-gap decay trace on the d-ary tree");
    cmd_decay->add_option("--d", decay_d, "tree arity")->required();
    cmd_decay->add_option("--beta", decay_beta, "edge activity in (0,1)")->required();
    cmd_decay->add_option("--lambda", decay_lambda, "vertex activity");
    cmd_decay->add_option("--levels", levels, "levels to trace");
    Format decay_fmt = Format::human;
    add_format_flag(cmd_decay, decay_fmt);
    cmd_decay->callback([&] { run_decay(decay_d, decay_beta, decay_lambda, levels, decay_fmt); });

    auto* cmd_compare = app.add_subcommand("compare", "exact vs approximate partition function");
    add_graph_flag(cmd_compare, c);
    add_system_flags(cmd_compare, c);
    cmd_compare->add_option("--eps", eps, "relative error budget in (0,1)")->required();
    add_format_flag(cmd_compare, c.format);
    cmd_compare->callback([&] { run_compare(c, eps); });

    int gen_n = 8, gen_maxdeg = 4, gen_extra = 0, gen_pins = 0;
    std::uint64_t gen_seed = 1;
    std::string gen_out;
    auto* cmd_gen = app.add_subcommand("gen", "seeded random connected graph");
    cmd_gen->add_option("--n", gen_n, "vertex count")->required();
    cmd_gen->add_option("--max-degree", gen_maxdeg, "degree cap");
    cmd_gen->add_option("--extra-edges", gen_extra, "edges beyond the spanning tree");
    cmd_gen->add_option("--pins", gen_pins, "random pinned vertices");
    cmd_gen->add_option("--seed", gen_seed, "generator seed");
    cmd_gen->add_option("--out", gen_out, "output file (default stdout)");
    cmd_gen->callback(
        [&] { run_gen(gen_n, gen_maxdeg, gen_extra, gen_pins, gen_seed, gen_out); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const TooLargeError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const UnsupportedRegimeError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const NumericError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return exit_code;
}
