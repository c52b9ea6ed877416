#include "spintree/model.hpp"

#include <cmath>
#include <limits>

#include "spintree/errors.hpp"

namespace spintree {

SpinSystem::SpinSystem(double beta_, double gamma_, double lambda_)
    : beta(beta_), gamma(gamma_), lambda(lambda_) {
    if (!(beta >= 0.0) || !std::isfinite(beta))
        throw InputError("beta must be finite and nonnegative");
    if (!(gamma >= 0.0) || !std::isfinite(gamma))
        throw InputError("gamma must be finite and nonnegative");
    if (!(lambda >= 0.0) || !std::isfinite(lambda))
        throw InputError("lambda must be finite and nonnegative");
}

Regime classify(const SpinSystem& sys) {
    if (!sys.soft()) return Regime::hard;
    double bg = sys.beta * sys.gamma;
    if (bg == 1.0) return Regime::trivial;
    return bg < 1.0 ? Regime::antiferro_soft : Regime::ferro;
}

const char* regime_name(Regime r) {
    switch (r) {
        case Regime::antiferro_soft: return "antiferro-soft";
        case Regime::ferro: return "ferro";
        case Regime::hard: return "hard";
        case Regime::trivial: return "trivial";
    }
    return "?";
}

ConfigCounts count_config(const Graph& g, const Configuration& sigma) {
    if (sigma.size() != static_cast<size_t>(g.vertex_count()))
        throw InputError("configuration length does not match vertex count");
    ConfigCounts c{0, 0, 0};
    for (auto s : sigma)
        if (s == Spin::minus) ++c.minus_vertices;
    for (const auto& [u, v] : g.edges()) {
        Spin su = sigma[static_cast<size_t>(u)], sv = sigma[static_cast<size_t>(v)];
        if (su != sv) continue;
        if (su == Spin::plus) ++c.plus_edges;
        else ++c.minus_edges;
    }
    return c;
}

double log_weight(const SpinSystem& sys, const Graph& g, const Configuration& sigma) {
    for (int v = 0; v < g.vertex_count(); ++v)
        if (auto p = g.pin(v); p && sigma[static_cast<size_t>(v)] != *p)
            throw InputError("configuration violates pin at vertex " + std::to_string(v));
    ConfigCounts c = count_config(g, sigma);
    // Forbidden only through a zero activity; 0^0 = 1 by the empty-product convention.
    if (sys.lambda == 0.0 && c.minus_vertices > 0)
        return -std::numeric_limits<double>::infinity();
    if (sys.beta == 0.0 && c.plus_edges > 0) return -std::numeric_limits<double>::infinity();
    if (sys.gamma == 0.0 && c.minus_edges > 0) return -std::numeric_limits<double>::infinity();
    double lw = 0.0;
    if (c.minus_vertices > 0) lw += static_cast<double>(c.minus_vertices) * std::log(sys.lambda);
    if (c.plus_edges > 0) lw += static_cast<double>(c.plus_edges) * std::log(sys.beta);
    if (c.minus_edges > 0) lw += static_cast<double>(c.minus_edges) * std::log(sys.gamma);
    return lw;
}

IsingView to_ising(const SpinSystem& sys, const Graph& g) {
    if (!sys.soft()) throw UnsupportedRegimeError("Ising view requires beta, gamma > 0");
    IsingView iv;
    iv.beta_prime = std::sqrt(sys.beta * sys.gamma);
    iv.lambda_v.resize(static_cast<size_t>(g.vertex_count()));
    double log_ratio = std::log(sys.gamma) - std::log(sys.beta);
    for (int v = 0; v < g.vertex_count(); ++v)
        iv.lambda_v[static_cast<size_t>(v)] =
            sys.lambda * std::exp(0.5 * log_ratio * g.degree(v));
    iv.scale_log = 0.5 * static_cast<double>(g.edge_count()) *
                   (std::log(sys.beta) - std::log(sys.gamma));
    return iv;
}

double log_weight_ising(const IsingView& iv, const Graph& g, const Configuration& sigma) {
    if (sigma.size() != static_cast<size_t>(g.vertex_count()))
        throw InputError("configuration length does not match vertex count");
    double lw = 0.0;
    double log_bp = std::log(iv.beta_prime);
    for (int v = 0; v < g.vertex_count(); ++v)
        if (sigma[static_cast<size_t>(v)] == Spin::minus)
            lw += std::log(iv.lambda_v[static_cast<size_t>(v)]);
    for (const auto& [u, v] : g.edges())
        if (sigma[static_cast<size_t>(u)] == sigma[static_cast<size_t>(v)]) lw += log_bp;
    return lw;
}

EnergyTranslation energy_to_activities(double Qpp, double Qpm, double Qmm, double h) {
    SpinSystem sys(std::exp(-Qpp + Qpm), std::exp(-Qmm + Qpm), std::exp(2.0 * h));
    return EnergyTranslation{sys, Qpm, h};
}

}  // namespace spintree
