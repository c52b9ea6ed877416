#include "spintree/graph.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "spintree/errors.hpp"

namespace spintree {

Graph::Graph(int n, std::vector<std::pair<int, int>> edges,
             std::vector<std::pair<int, Spin>> pins)
    : n_(n), edges_(std::move(edges)), pin_(static_cast<size_t>(std::max(n, 0)), 0) {
    if (n < 0) throw InputError("vertex count must be nonnegative");
    for (auto& [u, v] : edges_) {
        if (u < 0 || u >= n_ || v < 0 || v >= n_)
            throw InputError("edge endpoint out of range: (" + std::to_string(u) + ", " +
                             std::to_string(v) + ")");
        if (u == v) throw InputError("self-loop at vertex " + std::to_string(u));
        if (u > v) std::swap(u, v);
    }
    std::sort(edges_.begin(), edges_.end());
    if (std::adjacent_find(edges_.begin(), edges_.end()) != edges_.end())
        throw InputError("duplicate edge");

    adj_.assign(static_cast<size_t>(n_), {});
    for (const auto& [u, v] : edges_) {
        adj_[static_cast<size_t>(u)].push_back(v);
        adj_[static_cast<size_t>(v)].push_back(u);
    }
    for (auto& a : adj_) {
        std::sort(a.begin(), a.end());
        max_degree_ = std::max(max_degree_, static_cast<int>(a.size()));
    }

    for (const auto& [v, s] : pins) {
        check_vertex(v);
        auto& slot = pin_[static_cast<size_t>(v)];
        if (slot != 0) throw InputError("vertex " + std::to_string(v) + " pinned twice");
        slot = static_cast<std::int8_t>(s);
    }
    free_count_ = n_;
    for (auto p : pin_)
        if (p != 0) --free_count_;
}

void Graph::check_vertex(int v) const {
    if (v < 0 || v >= n_)
        throw InputError("vertex out of range: " + std::to_string(v));
}

const std::vector<int>& Graph::neighbors(int v) const {
    check_vertex(v);
    return adj_[static_cast<size_t>(v)];
}

int Graph::degree(int v) const {
    check_vertex(v);
    return static_cast<int>(adj_[static_cast<size_t>(v)].size());
}

std::optional<Spin> Graph::pin(int v) const {
    check_vertex(v);
    auto p = pin_[static_cast<size_t>(v)];
    if (p == 0) return std::nullopt;
    return p > 0 ? Spin::plus : Spin::minus;
}

bool Graph::pinned(int v) const { return pin(v).has_value(); }

std::vector<int> Graph::free_vertices() const {
    std::vector<int> out;
    out.reserve(static_cast<size_t>(free_count_));
    for (int v = 0; v < n_; ++v)
        if (pin_[static_cast<size_t>(v)] == 0) out.push_back(v);
    return out;
}

Graph Graph::with_pin(int v, Spin s) const {
    check_vertex(v);
    if (pinned(v)) throw InputError("vertex " + std::to_string(v) + " already pinned");
    Graph g = *this;
    g.pin_[static_cast<size_t>(v)] = static_cast<std::int8_t>(s);
    --g.free_count_;
    return g;
}

namespace {

[[noreturn]] void parse_fail(int line, const std::string& msg) {
    throw InputError("graph parse error at line " + std::to_string(line) + ": " + msg);
}

}  // namespace

Graph parse_graph(std::istream& in) {
    std::string line;
    int lineno = 0;
    int n = -1;
    long m = -1;
    long edges_read = 0;
    std::vector<std::pair<int, int>> edges;
    std::vector<std::pair<int, Spin>> pins;

    while (std::getline(in, line)) {
        ++lineno;
        size_t start = line.find_first_not_of(" \t\r");
        if (start == std::string::npos || line[start] == '#') continue;
        std::istringstream ls(line);

        if (n < 0) {
            if (!(ls >> n >> m) || n < 0 || m < 0) parse_fail(lineno, "expected header \"n m\"");
            edges.reserve(static_cast<size_t>(m));
            continue;
        }
        if (edges_read < m) {
            int u, v;
            if (!(ls >> u >> v)) parse_fail(lineno, "expected edge \"u v\"");
            std::string extra;
            if (ls >> extra) parse_fail(lineno, "trailing content after edge");
            edges.emplace_back(u, v);
            ++edges_read;
            continue;
        }
        std::string kw;
        ls >> kw;
        if (kw != "pin") parse_fail(lineno, "expected \"pin v +|-\", got \"" + kw + "\"");
        int v;
        std::string sign;
        if (!(ls >> v >> sign) || (sign != "+" && sign != "-"))
            parse_fail(lineno, "expected \"pin v +|-\"");
        pins.emplace_back(v, sign == "+" ? Spin::plus : Spin::minus);
    }
    if (n < 0) throw InputError("graph parse error: empty input");
    if (edges_read < m)
        throw InputError("graph parse error: expected " + std::to_string(m) + " edges, got " +
                         std::to_string(edges_read));
    try {
        return Graph(n, std::move(edges), std::move(pins));
    } catch (const InputError& e) {
        throw InputError(std::string("graph parse error: ") + e.what());
    }
}

Graph parse_graph_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open graph file: " + path);
    return parse_graph(in);
}

std::string format_graph(const Graph& g) {
    std::ostringstream out;
    out << g.vertex_count() << " " << g.edge_count() << "\n";
    for (const auto& [u, v] : g.edges()) out << u << " " << v << "\n";
    for (int v = 0; v < g.vertex_count(); ++v)
        if (auto p = g.pin(v)) out << "pin " << v << " " << (*p == Spin::plus ? "+" : "-") << "\n";
    return out.str();
}

}  // namespace spintree
