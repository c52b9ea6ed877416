#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace spintree {

enum class Spin : std::int8_t { minus = -1, plus = +1 };

inline Spin flip(Spin s) { return s == Spin::plus ? Spin::minus : Spin::plus; }

// Finite simple graph on vertices 0..n-1 with optional pinned spins
// (boundary conditions). Immutable after construction; pinned variants are
// derived as new values, which is how the telescoping estimator walks the
// vertex order.
class Graph {
  public:
    Graph(int n, std::vector<std::pair<int, int>> edges,
          std::vector<std::pair<int, Spin>> pins = {});

    int vertex_count() const { return n_; }
    int edge_count() const { return static_cast<int>(edges_.size()); }
    const std::vector<std::pair<int, int>>& edges() const { return edges_; }

    // neighbor list, ascending vertex id
    const std::vector<int>& neighbors(int v) const;
    int degree(int v) const;
    int max_degree() const { return max_degree_; }

    std::optional<Spin> pin(int v) const;
    bool pinned(int v) const;
    int free_count() const { return free_count_; }
    std::vector<int> free_vertices() const;  // ascending id

    Graph with_pin(int v, Spin s) const;

  private:
    void check_vertex(int v) const;

    int n_ = 0;
    int max_degree_ = 0;
    int free_count_ = 0;
    std::vector<std::pair<int, int>> edges_;  // normalized u < v, sorted
    std::vector<std::vector<int>> adj_;
    std::vector<std::int8_t> pin_;  // 0 free, +1 / -1 pinned
};

// Text format: '#' starts a comment line; first data line "n m"; then m lines
// "u v" (0-based); then optional lines "pin v +" / "pin v -". Errors carry the
// offending line number.
Graph parse_graph(std::istream& in);
Graph parse_graph_file(const std::string& path);
std::string format_graph(const Graph& g);

}  // namespace spintree
