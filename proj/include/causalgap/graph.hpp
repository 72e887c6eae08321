#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "causalgap/error.hpp"
#include "causalgap/node_set.hpp"

namespace causalgap {

struct NodeSpec {
    std::string label;
    bool observed = true;

    friend bool operator==(const NodeSpec&, const NodeSpec&) = default;
};

using Edge = std::pair<std::string, std::string>;

/// Unvalidated graph data, as produced by parsers and hand-written fixtures.
struct GraphSpec {
    std::vector<NodeSpec> nodes;
    std::vector<Edge> edges;
};

namespace detail {

inline std::optional<std::vector<std::size_t>> find_cycle(const std::vector<Mask>& children)
{
    const std::size_t n = children.size();
    std::vector<int> state(n, 0); // 0 new, 1 on stack, 2 done
    std::vector<std::size_t> parent(n, n);
    for (std::size_t root = 0; root < n; ++root) {
        if (state[root] != 0)
            continue;
        std::vector<std::pair<std::size_t, Mask>> stack{{root, children[root]}};
        state[root] = 1;
        while (!stack.empty()) {
            auto& [v, pending] = stack.back();
            if (pending == 0) {
                state[v] = 2;
                stack.pop_back();
                continue;
            }
            const auto w = static_cast<std::size_t>(std::countr_zero(pending));
            pending &= pending - 1;
            if (state[w] == 1) {
                std::vector<std::size_t> cycle{w};
                for (std::size_t u = v; u != w; u = parent[u])
                    cycle.push_back(u);
                cycle.push_back(w);
                std::reverse(cycle.begin(), cycle.end());
                return cycle;
            }
            if (state[w] == 0) {
                state[w] = 1;
                parent[w] = v;
                stack.push_back({w, children[w]});
            }
        }
    }
    return std::nullopt;
}

} // namespace detail

/// Checks every GDAG axiom; returns the first violation found.
inline std::optional<Error> validate(const GraphSpec& spec)
{
    std::map<std::string, std::size_t> index;
    for (const auto& node : spec.nodes) {
        if (node.label.empty())
            return Error(ErrorCode::ParseError, "empty node label");
        if (!index.emplace(node.label, index.size()).second)
            return Error(ErrorCode::DuplicateLabel, "node '" + node.label + "' declared twice");
    }
    if (spec.nodes.size() > max_nodes)
        return Error(ErrorCode::TooLarge, "graphs are limited to 64 nodes");
    std::vector<Mask> children(spec.nodes.size(), 0);
    for (const auto& [tail, head] : spec.edges) {
        auto t = index.find(tail);
        auto h = index.find(head);
        if (t == index.end() || h == index.end())
            return Error(ErrorCode::DanglingEdge,
                         "edge " + tail + " -> " + head + " references an undeclared node");
        if (t->second == h->second)
            return Error(ErrorCode::SelfLoop, "self-loop on '" + tail + "'");
        if (contains(children[t->second], h->second))
            return Error(ErrorCode::DuplicateEdge, "edge " + tail + " -> " + head + " listed twice");
        children[t->second] |= bit(h->second);
    }
    if (auto cycle = detail::find_cycle(children)) {
        std::string text;
        for (auto i : *cycle) {
            if (!text.empty())
                text += " -> ";
            text += spec.nodes[i].label;
        }
        return Error(ErrorCode::CycleDetected, text);
    }
    return std::nullopt;
}

/// A generalized DAG: an acyclic digraph whose nodes are flagged observed or
/// latent. Immutable once constructed; construction validates.
class Gdag {
public:
    Gdag() = default;

    explicit Gdag(const GraphSpec& spec)
    {
        if (auto err = validate(spec))
            throw *err;
        for (const auto& node : spec.nodes) {
            index_.emplace(node.label, nodes_.size());
            nodes_.push_back(node);
        }
        parents_.assign(nodes_.size(), 0);
        children_.assign(nodes_.size(), 0);
        for (const auto& [tail, head] : spec.edges) {
            const auto t = index_.at(tail);
            const auto h = index_.at(head);
            children_[t] |= bit(h);
            parents_[h] |= bit(t);
        }
    }

    Gdag(std::vector<NodeSpec> nodes, std::vector<Edge> edges)
        : Gdag(GraphSpec{std::move(nodes), std::move(edges)})
    {
    }

    std::size_t size() const { return nodes_.size(); }
    const std::vector<NodeSpec>& nodes() const { return nodes_; }
    const std::string& label(std::size_t i) const { return nodes_[i].label; }
    bool observed(std::size_t i) const { return nodes_[i].observed; }

    bool has_node(const std::string& label) const { return index_.count(label) != 0; }

    std::size_t index(const std::string& label) const
    {
        auto it = index_.find(label);
        if (it == index_.end())
            throw Error(ErrorCode::UnknownNode, "no node '" + label + "'");
        return it->second;
    }

    bool is_observed(const std::string& label) const { return observed(index(label)); }

    Mask parents(std::size_t i) const { return parents_[i]; }
    Mask children(std::size_t i) const { return children_[i]; }

    bool has_edge(const std::string& tail, const std::string& head) const
    {
        return contains(children_[index(tail)], index(head));
    }

    Mask all_mask() const { return size() == 64 ? ~Mask{0} : bit(size()) - 1; }

    Mask observed_mask() const
    {
        Mask m = 0;
        for (std::size_t i = 0; i < size(); ++i)
            if (nodes_[i].observed)
                m |= bit(i);
        return m;
    }

    Mask latent_mask() const { return all_mask() & ~observed_mask(); }

    Mask mask(const NodeSet& s) const
    {
        Mask m = 0;
        for (const auto& x : s)
            m |= bit(index(x));
        return m;
    }

    NodeSet set(Mask m) const
    {
        NodeSet out;
        for_each_bit(m, [&](std::size_t i) { out.insert(nodes_[i].label); });
        return out;
    }

    NodeSet observed_nodes() const { return set(observed_mask()); }
    NodeSet latent_nodes() const { return set(latent_mask()); }

    /// Edges ordered by (tail index, head index).
    std::vector<Edge> edges() const
    {
        std::vector<Edge> out;
        for (std::size_t t = 0; t < size(); ++t)
            for_each_bit(children_[t], [&](std::size_t h) { out.emplace_back(label(t), label(h)); });
        return out;
    }

    GraphSpec spec() const { return GraphSpec{nodes_, edges()}; }

    /// Indices in a topological order (parents before children), ties by index.
    std::vector<std::size_t> topological_order() const
    {
        std::vector<std::size_t> order;
        Mask placed = 0;
        while (order.size() < size()) {
            for (std::size_t i = 0; i < size(); ++i) {
                if (!contains(placed, i) && (parents_[i] & ~placed) == 0) {
                    order.push_back(i);
                    placed |= bit(i);
                    break;
                }
            }
        }
        return order;
    }

    /// Structural equality: same labelled nodes with the same flags and the
    /// same edge set, independent of declaration order.
    friend bool operator==(const Gdag& a, const Gdag& b)
    {
        if (a.size() != b.size())
            return false;
        for (const auto& node : a.nodes_) {
            if (!b.has_node(node.label) || b.is_observed(node.label) != node.observed)
                return false;
        }
        auto ea = a.edges();
        auto eb = b.edges();
        std::sort(ea.begin(), ea.end());
        std::sort(eb.begin(), eb.end());
        return ea == eb;
    }

private:
    std::vector<NodeSpec> nodes_;
    std::map<std::string, std::size_t> index_;
    std::vector<Mask> parents_;
    std::vector<Mask> children_;
};

// ---------------------------------------------------------------------------
// Reachability

/// Proper ancestors of the nodes in `m` (a node is an ancestor of a set
/// member only through a non-trivial directed path).
/// Nodes in `removed` are treated as deleted together with their edges.
inline Mask ancestors_mask(const Gdag& g, Mask m, Mask removed = 0)
{
    Mask out = 0;
    Mask frontier = 0;
    for_each_bit(m & ~removed, [&](std::size_t i) { frontier |= g.parents(i); });
    frontier &= ~removed;
    while (frontier != 0) {
        const auto i = static_cast<std::size_t>(std::countr_zero(frontier));
        frontier &= frontier - 1;
        if (contains(out, i))
            continue;
        out |= bit(i);
        frontier |= g.parents(i) & ~out & ~removed;
    }
    return out;
}

inline Mask descendants_mask(const Gdag& g, Mask m)
{
    Mask out = 0;
    Mask frontier = 0;
    for_each_bit(m, [&](std::size_t i) { frontier |= g.children(i); });
    while (frontier != 0) {
        const auto i = static_cast<std::size_t>(std::countr_zero(frontier));
        frontier &= frontier - 1;
        if (contains(out, i))
            continue;
        out |= bit(i);
        frontier |= g.children(i) & ~out;
    }
    return out;
}

inline NodeSet ancestors(const Gdag& g, const NodeSet& s) { return g.set(ancestors_mask(g, g.mask(s))); }

inline NodeSet descendants(const Gdag& g, const NodeSet& s) { return g.set(descendants_mask(g, g.mask(s))); }

// ---------------------------------------------------------------------------
// d-separation

/// Nodes reachable from `x` along paths that are active given `z`
/// (Bayes-ball traversal) in the subgraph induced on the complement of
/// `removed`. Members of `x` are included.
inline Mask active_reach(const Gdag& g, Mask x, Mask z, Mask removed = 0)
{
    const Mask keep = ~removed;
    const Mask z_or_anc = z | ancestors_mask(g, z, removed);
    // visited[dir] marks nodes entered from a child (up) or a parent (down).
    Mask visited_up = 0;
    Mask visited_down = 0;
    Mask reached = 0;
    std::vector<std::pair<std::size_t, bool>> stack; // (node, arrived going up)
    for_each_bit(x & keep, [&](std::size_t i) { stack.emplace_back(i, true); });
    while (!stack.empty()) {
        auto [v, up] = stack.back();
        stack.pop_back();
        Mask& seen = up ? visited_up : visited_down;
        if (contains(seen, v))
            continue;
        seen |= bit(v);
        const bool in_z = contains(z, v);
        if (!in_z)
            reached |= bit(v);
        if (up) {
            if (!in_z) {
                for_each_bit(g.parents(v) & keep, [&](std::size_t p) { stack.emplace_back(p, true); });
                for_each_bit(g.children(v) & keep, [&](std::size_t c) { stack.emplace_back(c, false); });
            }
        } else {
            if (!in_z)
                for_each_bit(g.children(v) & keep, [&](std::size_t c) { stack.emplace_back(c, false); });
            if (contains(z_or_anc, v))
                for_each_bit(g.parents(v) & keep, [&](std::size_t p) { stack.emplace_back(p, true); });
        }
    }
    return reached;
}

/// Mask-level d-separation; requires pairwise disjoint, non-empty x and y.
inline bool d_separated_mask(const Gdag& g, Mask x, Mask y, Mask z)
{
    return (active_reach(g, x, z) & y) == 0;
}

namespace detail {

inline void require_disjoint(std::initializer_list<Mask> sets)
{
    Mask seen = 0;
    for (Mask m : sets) {
        if (seen & m)
            throw Error(ErrorCode::OverlappingSets, "node sets must be pairwise disjoint");
        seen |= m;
    }
}

} // namespace detail

inline bool d_separated(const Gdag& g, const NodeSet& x, const NodeSet& y, const NodeSet& z)
{
    const Mask mx = g.mask(x), my = g.mask(y), mz = g.mask(z);
    if (mx == 0 || my == 0)
        throw Error(ErrorCode::EmptySet, "x and y must be non-empty");
    detail::require_disjoint({mx, my, mz});
    return d_separated_mask(g, mx, my, mz);
}

// ---------------------------------------------------------------------------
// Deletion and e-separation

/// Induced subgraph on the complement of `w`.
inline Gdag delete_nodes(const Gdag& g, const NodeSet& w)
{
    const Mask mw = g.mask(w);
    GraphSpec spec;
    for (std::size_t i = 0; i < g.size(); ++i)
        if (!contains(mw, i))
            spec.nodes.push_back(g.nodes()[i]);
    for (auto& e : g.edges())
        if (!w.count(e.first) && !w.count(e.second))
            spec.edges.push_back(std::move(e));
    return Gdag(spec);
}

/// d-separation of x and y by z in the graph with `w` removed, evaluated
/// without materialising the induced subgraph.
inline bool e_separated_mask(const Gdag& g, Mask x, Mask y, Mask z, Mask w)
{
    return (active_reach(g, x, z, w) & y) == 0;
}

inline bool e_separated(const Gdag& g, const NodeSet& x, const NodeSet& y, const NodeSet& z, const NodeSet& w)
{
    const Mask mx = g.mask(x), my = g.mask(y), mz = g.mask(z), mw = g.mask(w);
    if (mx == 0 || my == 0)
        throw Error(ErrorCode::EmptySet, "x and y must be non-empty");
    detail::require_disjoint({mx, my, mz, mw});
    return e_separated_mask(g, mx, my, mz, mw);
}

// ---------------------------------------------------------------------------
// Hidden paths, connected subsets, canonical projection

/// Observed nodes reachable from `from` by a directed path of length >= 1
/// whose intermediate nodes are all latent.
inline Mask hidden_reach(const Gdag& g, std::size_t from)
{
    const Mask latent = g.latent_mask();
    Mask reached = 0;
    Mask visited = 0;
    Mask frontier = g.children(from);
    while (frontier != 0) {
        const auto v = static_cast<std::size_t>(std::countr_zero(frontier));
        frontier &= frontier - 1;
        if (contains(visited, v))
            continue;
        visited |= bit(v);
        if (contains(latent, v))
            frontier |= g.children(v) & ~visited;
        else
            reached |= bit(v);
    }
    return reached;
}

/// True iff a directed path x -> ... -> y with at least two arrows exists
/// whose intermediate nodes are all latent.
inline bool hidden_path_exists(const Gdag& g, const std::string& x, const std::string& y)
{
    const auto ix = g.index(x);
    const auto iy = g.index(y);
    if (ix == iy)
        throw Error(ErrorCode::OverlappingSets, "hidden path endpoints must differ");
    const Mask latent = g.latent_mask();
    Mask visited = 0;
    Mask frontier = g.children(ix) & latent;
    while (frontier != 0) {
        const auto v = static_cast<std::size_t>(std::countr_zero(frontier));
        frontier &= frontier - 1;
        if (contains(visited, v))
            continue;
        visited |= bit(v);
        if (contains(g.children(v), iy))
            return true;
        frontier |= g.children(v) & latent & ~visited;
    }
    return false;
}

/// Maximal connected observed subsets (size >= 2) as masks, sorted by
/// size then member labels.
inline std::vector<Mask> maximal_connected_masks(const Gdag& g)
{
    std::vector<Mask> candidates;
    for_each_bit(g.latent_mask(), [&](std::size_t u) {
        const Mask r = hidden_reach(g, u);
        if (popcount(r) >= 2)
            candidates.push_back(r);
    });
    std::vector<Mask> out;
    for (Mask c : candidates) {
        bool dominated = false;
        for (Mask d : candidates)
            if (d != c && (c & d) == c)
                dominated = true;
        if (!dominated && std::find(out.begin(), out.end(), c) == out.end())
            out.push_back(c);
    }
    std::sort(out.begin(), out.end(),
              [&](Mask a, Mask b) { return set_order_less(g.set(a), g.set(b)); });
    return out;
}

inline std::vector<NodeSet> maximal_connected_subsets(const Gdag& g)
{
    std::vector<NodeSet> out;
    for (Mask m : maximal_connected_masks(g))
        out.push_back(g.set(m));
    return out;
}

/// Deterministic name of the latent created for a facet: "U_" followed by
/// the member labels joined by '_', primed until unique in the graph.
inline std::string facet_latent_name(const NodeSet& members, const NodeSet& taken)
{
    std::string name = "U";
    for (const auto& m : members)
        name += "_" + m;
    while (taken.count(name))
        name += "'";
    return name;
}

inline Gdag canonical_projection(const Gdag& g)
{
    GraphSpec spec;
    NodeSet taken;
    std::vector<std::size_t> observed;
    for (std::size_t i = 0; i < g.size(); ++i) {
        if (g.observed(i)) {
            spec.nodes.push_back(g.nodes()[i]);
            observed.push_back(i);
        }
        taken.insert(g.label(i));
    }
    for (auto t : observed) {
        const Mask targets = (g.children(t) & g.observed_mask()) | hidden_reach(g, t);
        for (auto h : observed)
            if (contains(targets, h))
                spec.edges.emplace_back(g.label(t), g.label(h));
    }
    for (Mask facet : maximal_connected_masks(g)) {
        const NodeSet members = g.set(facet);
        const std::string name = facet_latent_name(members, taken);
        taken.insert(name);
        spec.nodes.push_back({name, false});
        for (const auto& m : members)
            spec.edges.emplace_back(name, m);
    }
    return Gdag(spec);
}

/// Equality up to renaming of latent nodes. Observed labels are fixed;
/// latents are compared by their (parents, children) neighbourhoods.
inline bool isomorphic_fixing_observed(const Gdag& a, const Gdag& b)
{
    if (a.observed_nodes() != b.observed_nodes())
        return false;
    if (popcount(a.latent_mask()) != popcount(b.latent_mask()))
        return false;
    for (const auto& x : a.observed_nodes())
        for (const auto& y : a.observed_nodes())
            if (x != y && a.has_edge(x, y) != b.has_edge(x, y))
                return false;
    // Latent-to-latent structure is matched only when both sides have none;
    // canonical graphs never do.
    auto signature = [](const Gdag& g) {
        std::vector<std::pair<NodeSet, NodeSet>> sig;
        bool nested = false;
        for_each_bit(g.latent_mask(), [&](std::size_t u) {
            if ((g.parents(u) | g.children(u)) & g.latent_mask())
                nested = true;
            sig.emplace_back(g.set(g.parents(u)), g.set(g.children(u)));
        });
        std::sort(sig.begin(), sig.end());
        return std::make_pair(nested, sig);
    };
    const auto sa = signature(a);
    const auto sb = signature(b);
    if (sa.first || sb.first) {
        // General case: fall back to trying label-preserving matches of
        // latents by exhaustive assignment (latent counts are tiny).
        std::vector<std::size_t> la, lb;
        for_each_bit(a.latent_mask(), [&](std::size_t u) { la.push_back(u); });
        for_each_bit(b.latent_mask(), [&](std::size_t u) { lb.push_back(u); });
        if (la.size() > 8)
            return false;
        std::sort(lb.begin(), lb.end());
        do {
            std::map<std::string, std::string> rename;
            for (const auto& x : a.observed_nodes())
                rename[x] = x;
            for (std::size_t i = 0; i < la.size(); ++i)
                rename[a.label(la[i])] = b.label(lb[i]);
            auto ea = a.edges();
            for (auto& [t, h] : ea) {
                t = rename[t];
                h = rename[h];
            }
            auto eb = b.edges();
            std::sort(ea.begin(), ea.end());
            std::sort(eb.begin(), eb.end());
            if (ea == eb)
                return true;
        } while (std::next_permutation(lb.begin(), lb.end()));
        return false;
    }
    return sa.second == sb.second;
}

inline bool is_canonical(const Gdag& g) { return isomorphic_fixing_observed(canonical_projection(g), g); }

// ---------------------------------------------------------------------------
// Skeleton

/// Undirected graph over the observed nodes. Edges are stored with the
/// endpoints in label order.
class Skeleton {
public:
    Skeleton() = default;

    explicit Skeleton(NodeSet nodes) : nodes_(std::move(nodes)) {}

    void add_edge(const std::string& a, const std::string& b)
    {
        if (!nodes_.count(a) || !nodes_.count(b))
            throw Error(ErrorCode::UnknownNode, "skeleton edge " + a + " - " + b + " has an unknown endpoint");
        if (a == b)
            throw Error(ErrorCode::SelfLoop, "skeleton self-loop on '" + a + "'");
        edges_.insert(a < b ? Edge{a, b} : Edge{b, a});
    }

    void remove_edge(const std::string& a, const std::string& b) { edges_.erase(a < b ? Edge{a, b} : Edge{b, a}); }

    bool adjacent(const std::string& a, const std::string& b) const
    {
        return edges_.count(a < b ? Edge{a, b} : Edge{b, a}) != 0;
    }

    const NodeSet& nodes() const { return nodes_; }
    const std::set<Edge>& edges() const& { return edges_; }
    std::set<Edge> edges() && { return std::move(edges_); }

    friend bool operator==(const Skeleton&, const Skeleton&) = default;

private:
    NodeSet nodes_;
    std::set<Edge> edges_;
};

/// Skeleton of the canonical projection: observed pairs joined by an arrow
/// or a hidden path, plus every pair inside a maximal connected subset.
inline Skeleton skeleton(const Gdag& g)
{
    Skeleton sk(g.observed_nodes());
    const Mask obs = g.observed_mask();
    for_each_bit(obs, [&](std::size_t t) {
        const Mask targets = (g.children(t) & obs) | hidden_reach(g, t);
        for_each_bit(targets, [&](std::size_t h) { sk.add_edge(g.label(t), g.label(h)); });
    });
    for (Mask facet : maximal_connected_masks(g)) {
        for_each_bit(facet, [&](std::size_t a) {
            for_each_bit(facet, [&](std::size_t b) {
                if (a < b)
                    sk.add_edge(g.label(a), g.label(b));
            });
        });
    }
    return sk;
}

} // namespace causalgap
