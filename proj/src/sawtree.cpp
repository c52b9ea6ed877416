#include "spintree/sawtree.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "spintree/errors.hpp"
#include "spintree/recursion.hpp"

namespace spintree {

namespace {

// Shared depth-first engine over the walk tree. Visitor receives structural
// node views; the folding of child intervals into F products is done by the
// caller through the frame hooks below.

struct Frame {
    int u;            // walk endpoint
    int parent;       // previous walk vertex, -1 at the root
    int depth;
    size_t next;      // index into ranked neighbors of u
    int child_count = 0;
    // Running products of h over completed child intervals. F is antitone, so
    // the node's lo endpoint uses the children's hi endpoints and vice versa.
    double prod_for_lo = 1.0;
    double prod_for_hi = 1.0;
};

class SawWalker {
  public:
    SawWalker(const IsingView& view, const Graph& g, int root, int depth_limit,
              const SawOptions& opts)
        : view_(view), g_(g), root_(root), limit_(depth_limit), opts_(opts) {
        if (root < 0 || root >= g.vertex_count())
            throw InputError("root vertex out of range: " + std::to_string(root));
        if (g.pinned(root))
            throw InputError("walk-tree root must be unpinned: " + std::to_string(root));
        if (depth_limit < 0) throw InputError("depth limit must be nonnegative");
        if (opts.ranking) {
            const auto& r = *opts.ranking;
            if (static_cast<int>(r.size()) != g.vertex_count())
                throw InputError("neighbor ranking must cover every vertex");
            for (int v = 0; v < g.vertex_count(); ++v) {
                auto sorted = r[static_cast<size_t>(v)];
                std::sort(sorted.begin(), sorted.end());
                if (sorted != g.neighbors(v))
                    throw InputError("neighbor ranking of vertex " + std::to_string(v) +
                                     " is not a permutation of its neighbors");
            }
        }
        on_walk_.assign(static_cast<size_t>(g.vertex_count()), false);
        walk_pos_.assign(static_cast<size_t>(g.vertex_count()), -1);
    }

    const std::vector<int>& ranked_neighbors(int v) const {
        return opts_.ranking ? (*opts_.ranking)[static_cast<size_t>(v)] : g_.neighbors(v);
    }

    int rank_of(int x, int v) const {
        // position of v within x's ranked neighbors
        const auto& r = ranked_neighbors(x);
        for (size_t i = 0; i < r.size(); ++i)
            if (r[i] == v) return static_cast<int>(i);
        throw InputError("vertices not adjacent");  // unreachable on valid input
    }

    // Runs the traversal; returns the root interval. The visit hook (may be
    // null) sees every node in preorder.
    MarginalInterval run(const std::function<void(const SawNodeView&)>* visit) {
        std::vector<Frame> stack;
        MarginalInterval root_iv;
        push_walk_node(stack, root_, -1, 0, visit);

        while (!stack.empty()) {
            Frame& fr = stack.back();
            if (fr.depth >= limit_) {
                // Frontier: never expanded. With no would-be children the node
                // evaluates exactly (empty product); otherwise it is free.
                MarginalInterval iv = count_would_be_children(fr.u, fr.parent) == 0
                                          ? exact_childless(fr.u)
                                          : MarginalInterval{0.0, 1.0};
                pop_walk_node(stack, iv, &root_iv, visit);
                continue;
            }
            const auto& nbrs = ranked_neighbors(fr.u);
            if (fr.next >= nbrs.size()) {
                MarginalInterval iv = close_internal(fr);
                pop_walk_node(stack, iv, &root_iv, visit);
                continue;
            }
            int x = nbrs[fr.next++];
            if (x == fr.parent) continue;
            if (auto p = g_.pin(x)) {
                fold_leaf(fr, *p == Spin::plus, fr.depth + 1, x, visit);
            } else if (on_walk_[static_cast<size_t>(x)]) {
                // The walk already passed through x and left it via y; the
                // closing pin is decided by x's own ranking of u versus y.
                int y = walk_[static_cast<size_t>(walk_pos_[static_cast<size_t>(x)]) + 1];
                fold_leaf(fr, rank_of(x, fr.u) > rank_of(x, y), fr.depth + 1, x, visit);
            } else {
                push_walk_node(stack, x, fr.u, fr.depth + 1, visit);
            }
        }
        return root_iv;
    }

    std::uint64_t nodes() const { return nodes_; }

  private:
    void count_node() {
        if (++nodes_ > opts_.node_cap)
            throw NumericError("walk-tree evaluation exceeded the node cap of " +
                               std::to_string(opts_.node_cap) +
                               " (depth limit " + std::to_string(limit_) + ")");
    }

    double lambda_of(int v) const { return view_.lambda_v[static_cast<size_t>(v)]; }

    MarginalInterval exact_childless(int u) const {
        double p = 1.0 / (1.0 + lambda_of(u));
        return MarginalInterval{p, p};
    }

    int count_would_be_children(int u, int parent) const {
        int k = 0;
        for (int x : g_.neighbors(u))
            if (x != parent) ++k;
        return k;
    }

    void push_walk_node(std::vector<Frame>& stack, int u, int parent, int depth,
                        const std::function<void(const SawNodeView&)>* visit) {
        count_node();
        if (visit) {
            int kids = depth >= limit_ ? 0 : count_would_be_children(u, parent);
            (*visit)(SawNodeView{u, depth, 0, lambda_of(u), kids});
        }
        stack.push_back(Frame{u, parent, depth, 0});
        on_walk_[static_cast<size_t>(u)] = true;
        walk_pos_[static_cast<size_t>(u)] = static_cast<int>(walk_.size());
        walk_.push_back(u);
    }

    // Fold a pinned leaf child straight into the parent's running products:
    // a + leaf contributes h(1) to both endpoints, a - leaf h(0).
    void fold_leaf(Frame& fr, bool plus, int depth, int origin,
                   const std::function<void(const SawNodeView&)>* visit) {
        count_node();
        if (visit) (*visit)(SawNodeView{origin, depth, plus ? +1 : -1, lambda_of(origin), 0});
        double hv = h_fn(plus ? 1.0 : 0.0, view_.beta_prime);
        fr.prod_for_lo *= hv;
        fr.prod_for_hi *= hv;
        ++fr.child_count;
    }

    MarginalInterval close_internal(const Frame& fr) const {
        double lv = lambda_of(fr.u);
        return MarginalInterval{1.0 / (1.0 + lv * fr.prod_for_lo),
                                1.0 / (1.0 + lv * fr.prod_for_hi)};
    }

    void pop_walk_node(std::vector<Frame>& stack, const MarginalInterval& iv,
                       MarginalInterval* root_iv,
                       const std::function<void(const SawNodeView&)>*) {
        const Frame fr = stack.back();
        stack.pop_back();
        on_walk_[static_cast<size_t>(fr.u)] = false;
        walk_pos_[static_cast<size_t>(fr.u)] = -1;
        walk_.pop_back();
        if (stack.empty()) {
            *root_iv = iv;
            return;
        }
        Frame& up = stack.back();
        up.prod_for_lo *= h_fn(iv.hi, view_.beta_prime);
        up.prod_for_hi *= h_fn(iv.lo, view_.beta_prime);
        ++up.child_count;
    }

    const IsingView& view_;
    const Graph& g_;
    int root_;
    int limit_;
    const SawOptions& opts_;
    std::vector<bool> on_walk_;
    std::vector<int> walk_pos_;
    std::vector<int> walk_;
    std::uint64_t nodes_ = 0;
};

}  // namespace

SawEvaluation eval_saw_interval(const IsingView& view, const Graph& g, int root,
                                int depth_limit, const SawOptions& opts) {
    SawWalker walker(view, g, root, depth_limit, opts);
    SawEvaluation ev;
    ev.interval = walker.run(nullptr);
    ev.nodes = walker.nodes();
    ev.depth_limit = depth_limit;
    return ev;
}

std::uint64_t visit_saw_tree(const IsingView& view, const Graph& g, int root,
                             int depth_limit,
                             const std::function<void(const SawNodeView&)>& visit,
                             const SawOptions& opts) {
    SawWalker walker(view, g, root, depth_limit, opts);
    walker.run(&visit);
    return walker.nodes();
}

int full_saw_depth(const Graph& g) { return g.vertex_count(); }

int required_depth(double epsilon, double c, double L1, double L2, long max_depth) {
    if (!(epsilon > 0.0)) throw InputError("epsilon must be positive");
    if (!(L1 > 0.0 && L2 > 0.0)) throw InputError("Lipschitz constants must be positive");
    if (!(c >= 0.0)) throw InputError("contraction rate must be nonnegative");
    if (c >= 1.0)
        throw NumericError("recursion is not contracting (rate " + std::to_string(c) + ")");
    auto deep_enough = [&](long l) {
        return L1 * L2 * std::pow(c, static_cast<double>(l)) <= epsilon;
    };
    if (deep_enough(0)) return 0;
    long hi = 1;
    while (hi < max_depth && !deep_enough(hi)) hi *= 2;
    hi = std::min(hi, max_depth);
    if (!deep_enough(hi))
        throw NumericError("certified depth exceeds the cap of " + std::to_string(max_depth) +
                           " levels (contraction rate " + std::to_string(c) + ")");
    long lo = hi / 2;  // deep_enough(lo) is false, deep_enough(hi) is true
    while (hi - lo > 1) {
        long mid = lo + (hi - lo) / 2;
        if (deep_enough(mid)) hi = mid;
        else lo = mid;
    }
    return static_cast<int>(hi);
}

}  // namespace spintree
