#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "doctest.h"
#include "spintree/errors.hpp"
#include "spintree/fptas.hpp"
#include "spintree/oracle.hpp"
#include "util.hpp"

using namespace spintree;

namespace {

Graph complete_graph(int n) {
    std::vector<std::pair<int, int>> edges;
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v) edges.push_back({u, v});
    return Graph(n, edges);
}

Graph cycle_graph(int n) {
    std::vector<std::pair<int, int>> edges;
    for (int v = 0; v < n; ++v) edges.push_back({v, (v + 1) % n});
    return Graph(n, edges);
}

}  // namespace

TEST_CASE("certification verdicts on canonical instances") {
    // a single edge: effective arity 1, unique for every activity
    Certificate k2 = certify(SpinSystem(0.5, 0.5, 3.0), Graph(2, {{0, 1}}));
    CHECK(k2.d == 1);
    CHECK(k2.ok);
    REQUIRE(k2.per_degree.size() == 1);
    CHECK_FALSE(k2.per_degree[0].log_lambda_c.has_value());
    CHECK(std::isinf(k2.per_degree[0].margin));
    CHECK(k2.contraction_c < 1.0);

    // K4 at beta' = 0.5 > 1/3: certified no matter the activity
    for (double lambda : {0.05, 1.0, 20.0}) {
        Certificate c = certify(SpinSystem(0.5, 0.5, lambda), complete_graph(4));
        CHECK(c.d == 2);
        CHECK(c.ok);
        CHECK(c.contraction_c < 1.0);
    }

    // K4 at beta' = 0.2 < 1/3 and lambda = 1: inside the non-uniqueness window
    Certificate bad = certify(SpinSystem(0.2, 0.2, 1.0), complete_graph(4));
    CHECK_FALSE(bad.ok);
    CHECK(bad.failing_degrees() == std::vector<int>{3});
    CHECK(failing_vertices(bad, complete_graph(4)) == std::vector<int>{0, 1, 2, 3});

    // a 6-cycle still folds to arity 2, so small beta fails there too
    Certificate c6 = certify(SpinSystem(0.2, 0.2, 1.0), cycle_graph(6));
    CHECK(c6.d == 2);
    CHECK_FALSE(c6.ok);

    // a large enough field rescues the K4 instance
    double log_lc = *c6.per_degree[0].log_lambda_c;
    Certificate saved = certify(SpinSystem(0.2, 0.2, std::exp(4.0)), complete_graph(4));
    CHECK(saved.ok);
    CHECK(saved.per_degree[0].margin == doctest::Approx(4.0 - log_lc).epsilon(1e-9));

    // barely past the threshold: certified but flagged as near the boundary
    Certificate near =
        certify(SpinSystem(0.2, 0.2, std::exp(log_lc + 1e-7)), complete_graph(4));
    CHECK(near.ok);
    CHECK(near.near_boundary);
    CHECK_FALSE(saved.near_boundary);

    // vertices are grouped by degree, one shared threshold
    Graph star(5, {{0, 1}, {0, 2}, {0, 3}, {0, 4}});
    Certificate st = certify(SpinSystem(0.4, 0.5, 1.2), star);
    REQUIRE(st.per_degree.size() == 2);
    CHECK(st.per_degree[0].degree == 1);
    CHECK(st.per_degree[1].degree == 4);
    CHECK(st.d == 3);
    CHECK(st.per_degree[0].log_lambda_c == st.per_degree[1].log_lambda_c);

    // only soft anti-ferromagnetic systems can be certified
    CHECK_THROWS_AS(certify(SpinSystem(2.0, 1.5, 1.0), star), UnsupportedRegimeError);
    CHECK_THROWS_AS(certify(SpinSystem(2.0, 0.5, 1.0), star), UnsupportedRegimeError);
    CHECK_THROWS_AS(certify(SpinSystem(0.0, 0.5, 1.0), star), UnsupportedRegimeError);
}

TEST_CASE("certification is invariant under swapping the spin roles") {
    std::mt19937_64 rng(62);
    for (int trial = 0; trial < 20; ++trial) {
        Graph g = testutil::random_connected_graph(rng, 2, 10, 4);
        SpinSystem sys = testutil::random_soft_antiferro(rng);
        SpinSystem mirror(sys.gamma, sys.beta, 1.0 / sys.lambda);
        Certificate a = certify(sys, g);
        Certificate b = certify(mirror, g);
        CHECK(a.ok == b.ok);
        CHECK(a.d == b.d);
        CHECK(std::abs(a.contraction_c - b.contraction_c) <= 1e-10);
        REQUIRE(a.per_degree.size() == b.per_degree.size());
        for (size_t i = 0; i < a.per_degree.size(); ++i) {
            CHECK(a.per_degree[i].in_region == b.per_degree[i].in_region);
            CHECK(std::abs(a.per_degree[i].abs_log_lambda -
                           b.per_degree[i].abs_log_lambda) <= 1e-10);
        }
    }
}

TEST_CASE("certified marginal enclosures cover the truth at the asked width") {
    SpinSystem sym(0.5, 0.5, 1.0);
    Graph p3(3, {{0, 1}, {1, 2}});
    MarginalInterval center = approx_marginal(sym, p3, 1, 1e-3);
    CHECK(center.width() <= 1e-3);
    CHECK(center.contains(exact_marginal(sym, p3, 1)));

    MarginalInterval c5 = approx_marginal(sym, cycle_graph(5), 0, 1e-4);
    CHECK(c5.width() <= 1e-4);
    CHECK(c5.contains(0.5));  // symmetric instance

    // conditioning through pins is respected
    Graph p3m = p3.with_pin(2, Spin::minus);
    MarginalInterval cond = approx_marginal(sym, p3m, 1, 1e-4);
    CHECK(cond.contains(exact_marginal(sym, p3m, 1)));

    CHECK_THROWS_AS(approx_marginal(sym, p3m, 2, 1e-3), InputError);   // pinned vertex
    CHECK_THROWS_AS(approx_marginal(sym, p3, 1, 0.0), InputError);
    CHECK_THROWS_AS(approx_marginal(SpinSystem(0.2, 0.2, 1.0), cycle_graph(6), 0, 1e-3),
                    UnsupportedRegimeError);
    try {
        approx_marginal(SpinSystem(0.2, 0.2, 1.0), cycle_graph(6), 0, 1e-3);
    } catch (const UnsupportedRegimeError& e) {
        std::string msg = e.what();
        CHECK(msg.find("degree 2") != std::string::npos);
        CHECK(msg.find("vertices") != std::string::npos);
    }
}

TEST_CASE("envelope depth is respected away from the full-depth fallback") {
    SpinSystem sym(0.5, 0.5, 1.0);
    Graph c12 = cycle_graph(12);
    Certificate cert = certify(sym, c12);
    REQUIRE(cert.ok);
    MarginalRun run = approx_marginal_run(sym, c12, 0, 0.05, &cert);
    CHECK(run.depth < full_saw_depth(c12));
    CHECK(run.interval.width() <= 0.05);
    CHECK(run.interval.width() <=
          cert.L1 * cert.L2 * std::pow(cert.contraction_c, run.depth));
    CHECK(run.interval.contains(0.5));

    // passing the certificate in or letting the run recompute it is the same
    MarginalRun again = approx_marginal_run(sym, c12, 0, 0.05);
    CHECK(again.interval.lo == run.interval.lo);
    CHECK(again.interval.hi == run.interval.hi);
    CHECK(again.depth == run.depth);
}

TEST_CASE("partition estimates on instances the oracle can check") {
    SpinSystem sym(0.5, 0.5, 1.0);
    for (const Graph& g : {Graph(2, {{0, 1}}), Graph(3, {{0, 1}, {1, 2}}), cycle_graph(5)}) {
        ZEstimate est = approx_partition(sym, g, 1e-3);
        double rel = std::abs(std::expm1(est.log_Z_hat - exact_partition(sym, g)));
        CHECK(est.relative_error_bound <= 1e-3);
        CHECK(rel <= est.relative_error_bound + 1e-12);
    }

    // the anchor term alone survives when everything is pinned
    Graph k2pp(2, {{0, 1}}, {{0, Spin::plus}, {1, Spin::plus}});
    ZEstimate anchored = approx_partition(sym, k2pp, 0.5);
    CHECK(anchored.log_Z_hat == doctest::Approx(std::log(0.5)).epsilon(1e-14));
    CHECK(anchored.relative_error_bound == 0.0);
    CHECK(anchored.vertices.empty());

    CHECK_THROWS_AS(approx_partition(sym, cycle_graph(5), 0.0), InputError);
    CHECK_THROWS_AS(approx_partition(sym, cycle_graph(5), 1.0), InputError);
    CHECK_THROWS_AS(approx_partition(sym, cycle_graph(5), -0.2), InputError);
    CHECK_THROWS_AS(approx_partition(SpinSystem(0.2, 0.2, 1.0), cycle_graph(6), 1e-3),
                    UnsupportedRegimeError);
}

TEST_CASE("every telescoped conditional marginal encloses its oracle value") {
    std::mt19937_64 rng(64);
    SpinSystem sys(0.45, 0.7, 1.5);
    Graph g = testutil::random_connected_graph(rng, 7, 9, 3, 0.2);
    REQUIRE(certify(sys, g).ok);
    ZEstimate est = approx_partition(sys, g, 1e-3);
    Graph cur = g;
    double anchor_check = exact_partition(sys, g);
    REQUIRE(est.vertices.size() == est.marginals.size());
    for (size_t i = 0; i < est.vertices.size(); ++i) {
        int v = est.vertices[i];
        double truth = exact_marginal(sys, cur, v);
        CHECK(est.marginals[i].lo <= truth + 1e-12);
        CHECK(est.marginals[i].hi >= truth - 1e-12);
        // telescoping with the oracle marginals recovers Z exactly
        anchor_check += std::log(truth);
        cur = cur.with_pin(v, Spin::plus);
    }
    Configuration all_plus(static_cast<size_t>(g.vertex_count()), Spin::plus);
    for (int v = 0; v < g.vertex_count(); ++v)
        if (auto p = g.pin(v)) all_plus[static_cast<size_t>(v)] = *p;
    CHECK(anchor_check == doctest::Approx(log_weight(sys, g, all_plus)).epsilon(1e-10));
}

TEST_CASE("random certified instances meet the advertised error bound") {
    std::mt19937_64 rng(6036);
    int done = 0;
    for (int attempt = 0; attempt < 600 && done < 30; ++attempt) {
        Graph g = testutil::random_connected_graph(rng, 2, 10, 4, 0.15);
        SpinSystem sys = testutil::random_soft_antiferro(rng);
        Certificate cert = certify(sys, g);
        if (!cert.ok || cert.near_boundary) continue;
        ++done;
        ZEstimate est = approx_partition(sys, g, 1e-3);
        double rel = std::abs(std::expm1(est.log_Z_hat - exact_partition(sys, g)));
        CHECK(est.relative_error_bound <= 1e-3);
        CHECK(rel <= est.relative_error_bound + 1e-12);

        // the depth stays within the envelope's prescription
        double min_delta = 1.0;
        for (int v : est.vertices) {
            double lambda_v =
                sys.lambda * std::pow(sys.gamma / sys.beta, g.degree(v) / 2.0);
            double p_lb =
                1.0 / (1.0 + lambda_v * std::pow(cert.beta_prime, -g.degree(v)));
            min_delta = std::min(min_delta, 1e-3 * p_lb / (4.0 * g.vertex_count()));
        }
        int l_req = std::min(required_depth(min_delta, cert.contraction_c, cert.L1, cert.L2),
                             full_saw_depth(g));
        CHECK(est.depth_used <= l_req + 3);
    }
    CHECK(done == 30);
}

TEST_CASE("accuracy scales with epsilon at bounded extra depth") {
    // large enough that the envelope depth stays below the exact full depth
    SpinSystem sym(0.5, 0.5, 1.0);
    Graph c60 = cycle_graph(60);
    int prev_depth = 0;
    double prev_bound = 1.0;
    for (double eps : {1e-1, 1e-3, 1e-5}) {
        ZEstimate est = approx_partition(sym, c60, eps);
        CHECK(est.relative_error_bound <= eps);
        CHECK(est.depth_used < full_saw_depth(c60));
        CHECK(est.depth_used >= prev_depth);
        CHECK(est.relative_error_bound <= prev_bound);
        prev_depth = est.depth_used;
        prev_bound = est.relative_error_bound;
    }
    // on the cycle the walk tree is two paths: node counts stay tiny
    ZEstimate est = approx_partition(sym, c60, 1e-5);
    CHECK(est.nodes_visited < 50'000);
}
