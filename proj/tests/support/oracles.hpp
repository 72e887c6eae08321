#pragma once

// Reference implementations used only to check the library. They follow the
// textbook definitions directly and share no code with the fast paths.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "causalgap/distribution.hpp"
#include "causalgap/graph.hpp"

namespace oracle {

using causalgap::Gdag;

/// Adjacency lists of a graph given by (tail, head) index pairs.
struct Dag {
    std::size_t n = 0;
    std::vector<std::vector<std::size_t>> children, parents;
};

inline Dag to_dag(const Gdag& g)
{
    Dag d;
    d.n = g.size();
    d.children.resize(d.n);
    d.parents.resize(d.n);
    for (const auto& [t, h] : g.edges()) {
        d.children[g.index(t)].push_back(g.index(h));
        d.parents[g.index(h)].push_back(g.index(t));
    }
    return d;
}

inline std::vector<bool> descendants_or_self(const Dag& d, std::size_t v)
{
    std::vector<bool> seen(d.n, false);
    std::vector<std::size_t> stack{v};
    seen[v] = true;
    while (!stack.empty()) {
        const auto u = stack.back();
        stack.pop_back();
        for (auto c : d.children[u])
            if (!seen[c]) {
                seen[c] = true;
                stack.push_back(c);
            }
    }
    return seen;
}

/// Every simple path between x and y, ignoring arrow direction, is checked
/// node by node: a non-collider in z blocks, and so does a collider with
/// neither itself nor any descendant in z.
inline bool path_d_separated(const Dag& d, std::size_t x, std::size_t y, const std::vector<bool>& in_z)
{
    std::vector<std::vector<bool>> desc(d.n);
    for (std::size_t v = 0; v < d.n; ++v)
        desc[v] = descendants_or_self(d, v);
    auto edge = [&](std::size_t a, std::size_t b) {
        for (auto c : d.children[a])
            if (c == b)
                return true;
        return false;
    };
    auto blocked = [&](const std::vector<std::size_t>& path) {
        for (std::size_t k = 1; k + 1 < path.size(); ++k) {
            const auto prev = path[k - 1], m = path[k], next = path[k + 1];
            const bool collider = edge(prev, m) && edge(next, m);
            if (collider) {
                bool opened = false;
                for (std::size_t v = 0; v < d.n; ++v)
                    if (desc[m][v] && in_z[v])
                        opened = true;
                if (!opened)
                    return true;
            } else if (in_z[m]) {
                return true;
            }
        }
        return false;
    };
    std::vector<std::size_t> path{x};
    std::vector<bool> on_path(d.n, false);
    on_path[x] = true;
    bool open_found = false;
    auto walk = [&](auto&& self, std::size_t u) -> void {
        if (open_found)
            return;
        if (u == y) {
            if (!blocked(path))
                open_found = true;
            return;
        }
        std::vector<std::size_t> nbrs = d.children[u];
        nbrs.insert(nbrs.end(), d.parents[u].begin(), d.parents[u].end());
        for (auto v : nbrs) {
            if (on_path[v])
                continue;
            on_path[v] = true;
            path.push_back(v);
            self(self, v);
            path.pop_back();
            on_path[v] = false;
        }
    };
    walk(walk, x);
    return !open_found;
}

/// Random DAG on `n` nodes: a random order, each forward pair joined with
/// probability `density`, each node latent with probability 1/4.
inline Gdag random_gdag(std::mt19937_64& rng, std::size_t n, double density)
{
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i)
        order[i] = i;
    std::shuffle(order.begin(), order.end(), rng);
    std::bernoulli_distribution join(density), latent(0.25);
    causalgap::GraphSpec spec;
    for (std::size_t i = 0; i < n; ++i)
        spec.nodes.push_back({"N" + std::to_string(i), !latent(rng)});
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = a + 1; b < n; ++b)
            if (join(rng))
                spec.edges.emplace_back("N" + std::to_string(order[a]), "N" + std::to_string(order[b]));
    return Gdag(spec);
}

/// Shannon entropy in bits of the named variables, summing the joint table
/// directly into a map keyed by the projected assignment.
inline double entropy(const causalgap::DiscreteDistribution& p, const std::vector<std::string>& names)
{
    std::vector<std::size_t> pos;
    for (const auto& n : names)
        pos.push_back(p.position(n));
    std::map<std::vector<std::size_t>, double> marginal;
    p.for_each([&](const causalgap::Assignment& a, const causalgap::Rational& m) {
        std::vector<std::size_t> key;
        for (auto i : pos)
            key.push_back(a[i]);
        marginal[key] += causalgap::to_double(m);
    });
    double h = 0;
    for (const auto& [k, q] : marginal)
        if (q > 0)
            h -= q * std::log2(q);
    return h;
}

} // namespace oracle
