#pragma once

#include <string>
#include <vector>

#include "spintree/graph.hpp"

namespace spintree {

// Two-state spin system: a configuration sigma gets weight
//   lambda^m(sigma) * beta^{n+(sigma)} * gamma^{n-(sigma)}
// where m counts minus vertices and n+/n- count monochromatic edges.
struct SpinSystem {
    double beta;    // (+,+) edge activity
    double gamma;   // (-,-) edge activity
    double lambda;  // vertex activity for spin -

    SpinSystem(double beta, double gamma, double lambda);

    bool soft() const { return beta > 0 && gamma > 0 && lambda > 0; }
    bool antiferro() const { return beta * gamma < 1; }
    bool ising() const { return beta == gamma; }
};

enum class Regime { antiferro_soft, ferro, hard, trivial };

Regime classify(const SpinSystem& sys);
const char* regime_name(Regime r);

// Total spin assignment, index = vertex id.
using Configuration = std::vector<Spin>;

struct ConfigCounts {
    long minus_vertices = 0;  // m
    long plus_edges = 0;      // n+
    long minus_edges = 0;     // n-
};

ConfigCounts count_config(const Graph& g, const Configuration& sigma);

// log of the configuration weight; -inf encodes a forbidden configuration
// under hard constraints (a zero activity with positive count). Throws if
// sigma disagrees with the graph's pins or has the wrong length.
double log_weight(const SpinSystem& sys, const Graph& g, const Configuration& sigma);

// Equivalent Ising parameters: a single edge activity beta' = sqrt(beta*gamma)
// on both monochromatic edge types and a degree-dependent vertex activity.
// Z_source = Z_ising * exp(scale_log).
struct IsingView {
    double beta_prime;
    std::vector<double> lambda_v;  // lambda * (gamma/beta)^(deg(v)/2)
    double scale_log;              // (|E|/2) * (log beta - log gamma)
};

IsingView to_ising(const SpinSystem& sys, const Graph& g);
double log_weight_ising(const IsingView& view, const Graph& g, const Configuration& sigma);

// Translation from a symmetric pair-energy description (edge energies
// Qpp/Qpm/Qmm, odd vertex field h, weight exp(-sum_E Q - sum_V h(spin)))
// to activity form. log Z_activities = log Z_energy + edge_log_offset*|E|
// + vertex_log_offset*|V|.
struct EnergyTranslation {
    SpinSystem system;
    double edge_log_offset;    // Qpm
    double vertex_log_offset;  // h

    double log_offset(const Graph& g) const {
        return edge_log_offset * g.edge_count() + vertex_log_offset * g.vertex_count();
    }
};

EnergyTranslation energy_to_activities(double Qpp, double Qpm, double Qmm, double h);

}  // namespace spintree
