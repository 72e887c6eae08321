#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "causalgap/distribution.hpp"
#include "causalgap/error.hpp"
#include "causalgap/graph.hpp"
#include "causalgap/node_set.hpp"

namespace causalgap {

/// (X _||_ Y | Z). Stored with x <= y (lexicographic on sorted members) so
/// that both spellings compare equal.
struct CiRelation {
    NodeSet x, y, z;

    CiRelation() = default;

    CiRelation(NodeSet a, NodeSet b, NodeSet c) : x(std::move(a)), y(std::move(b)), z(std::move(c))
    {
        if (x.empty() || y.empty())
            throw Error(ErrorCode::EmptySet, "both sides of a CI relation must be non-empty");
        if (!disjoint(x, y) || !disjoint(x, z) || !disjoint(y, z))
            throw Error(ErrorCode::OverlappingSets, "CI relation sets must be pairwise disjoint");
        if (y < x)
            std::swap(x, y);
    }

    NodeSet scope() const { return set_union(set_union(x, y), z); }

    friend bool operator==(const CiRelation&, const CiRelation&) = default;

    /// Total size, then z, then x, then y.
    friend bool operator<(const CiRelation& a, const CiRelation& b)
    {
        const auto na = a.x.size() + a.y.size() + a.z.size();
        const auto nb = b.x.size() + b.y.size() + b.z.size();
        if (na != nb)
            return na < nb;
        if (a.z != b.z)
            return set_order_less(a.z, b.z);
        if (a.x != b.x)
            return set_order_less(a.x, b.x);
        if (a.y != b.y)
            return set_order_less(a.y, b.y);
        return false;
    }
};

/// "X,Y _||_ U | Z"; the "| Z" part is omitted when Z is empty.
inline std::string format_ci(const CiRelation& r)
{
    std::string s = join_set(r.x) + " _||_ " + join_set(r.y);
    if (!r.z.empty())
        s += " | " + join_set(r.z);
    return s;
}

inline CiRelation parse_ci(const std::string& text)
{
    const auto sep = text.find("_||_");
    if (sep == std::string::npos)
        throw Error(ErrorCode::ParseError, "CI relation needs '_||_': '" + text + "'");
    const std::string lhs = text.substr(0, sep);
    std::string rhs = text.substr(sep + 4);
    std::string cond;
    if (auto bar = rhs.find('|'); bar != std::string::npos) {
        cond = rhs.substr(bar + 1);
        rhs = rhs.substr(0, bar);
    }
    return CiRelation(parse_set(lhs), parse_set(rhs), parse_set(cond));
}

/// A sorted, duplicate-free collection of relations over `scope`.
class CiSet {
public:
    CiSet() = default;

    CiSet(NodeSet scope, std::vector<CiRelation> relations) : scope_(std::move(scope))
    {
        for (auto& r : relations)
            insert(std::move(r));
    }

    void insert(CiRelation r)
    {
        for (const auto& v : r.scope())
            if (!scope_.count(v))
                throw Error(ErrorCode::UnknownVariable, "'" + v + "' is outside the CI set scope");
        auto it = std::lower_bound(relations_.begin(), relations_.end(), r);
        if (it == relations_.end() || !(*it == r))
            relations_.insert(it, std::move(r));
    }

    bool contains(const CiRelation& r) const { return std::binary_search(relations_.begin(), relations_.end(), r); }

    const NodeSet& scope() const { return scope_; }
    const std::vector<CiRelation>& relations() const { return relations_; }
    std::size_t size() const { return relations_.size(); }
    bool empty() const { return relations_.empty(); }

    auto begin() const { return relations_.begin(); }
    auto end() const { return relations_.end(); }

    friend bool operator==(const CiSet&, const CiSet&) = default;

private:
    NodeSet scope_;
    std::vector<CiRelation> relations_;
};

inline constexpr std::size_t unbounded_max_observed = 6;

/// Calls fn(x, y, z) for every triple of disjoint observed masks with
/// x, y non-empty, x < y (as masks) and every set of size <= cap.
template <typename Fn>
void for_each_observed_triple(const Gdag& g, std::size_t cap, Fn&& fn)
{
    const Mask obs = g.observed_mask();
    for_each_subset(obs, [&](Mask z) {
        if (static_cast<std::size_t>(popcount(z)) > cap)
            return;
        const Mask rest = obs & ~z;
        for_each_subset(rest, [&](Mask x) {
            if (x == 0 || static_cast<std::size_t>(popcount(x)) > cap)
                return;
            for_each_subset(rest & ~x, [&](Mask y) {
                if (y == 0 || y < x || static_cast<std::size_t>(popcount(y)) > cap)
                    return;
                fn(x, y, z);
            });
        });
    });
}

/// Every relation among observed nodes implied by d-separation in g. With no
/// cap the graph may have at most six observed nodes.
inline CiSet observed_ci_relations(const Gdag& g, std::optional<std::size_t> max_set_size = std::nullopt)
{
    const std::size_t n_obs = static_cast<std::size_t>(popcount(g.observed_mask()));
    if (!max_set_size && n_obs > unbounded_max_observed)
        throw Error(ErrorCode::TooLarge, "more than 6 observed nodes: supply a maximum set size");
    if (max_set_size && *max_set_size == 0)
        throw Error(ErrorCode::ParseError, "maximum set size must be positive");
    const std::size_t cap = max_set_size.value_or(max_nodes);
    std::vector<CiRelation> found;
    for_each_observed_triple(g, cap, [&](Mask x, Mask y, Mask z) {
        if (d_separated_mask(g, x, y, z))
            found.emplace_back(g.set(x), g.set(y), g.set(z));
    });
    return CiSet(g.observed_nodes(), std::move(found));
}

/// Mask form of ci_excluded_for_all_subsets.
inline bool ci_excluded_mask(const Gdag& g, Mask x, Mask y, Mask z, Mask w)
{
    bool excluded = true;
    for_each_subset(w, [&](Mask s) {
        if (excluded && d_separated_mask(g, x, y, z | s))
            excluded = false;
    });
    return excluded;
}

/// True iff (X _||_ Y | Z S) fails to be implied for every S within w.
inline bool ci_excluded_for_all_subsets(const Gdag& g, const NodeSet& x, const NodeSet& y, const NodeSet& z,
                                        const NodeSet& w)
{
    const Mask mx = g.mask(x), my = g.mask(y), mz = g.mask(z), mw = g.mask(w);
    if (mx == 0 || my == 0)
        throw Error(ErrorCode::EmptySet, "x and y must be non-empty");
    detail::require_disjoint({mx, my, mz, mw});
    return ci_excluded_mask(g, mx, my, mz, mw);
}

/// Exact test of P(xyz) P(z) = P(xz) P(yz) for every assignment.
inline bool ci_holds_in_distribution(const DiscreteDistribution& p, const CiRelation& r)
{
    require_variables(p, r.scope());
    const DiscreteDistribution joint = marginalize(p, r.scope());
    const NodeSet xz = set_union(r.x, r.z);
    const NodeSet yz = set_union(r.y, r.z);
    const DiscreteDistribution pxz = marginalize(joint, xz);
    const DiscreteDistribution pyz = marginalize(joint, yz);
    const DiscreteDistribution pz = marginalize(joint, r.z);
    auto positions = [&](const DiscreteDistribution& sub) {
        std::vector<std::size_t> pos;
        for (const auto& v : sub.variables())
            pos.push_back(joint.position(v.name));
        return pos;
    };
    const auto pos_xz = positions(pxz);
    const auto pos_yz = positions(pyz);
    const auto pos_z = positions(pz);
    auto project = [](const Assignment& a, const std::vector<std::size_t>& pos) {
        Assignment out;
        out.reserve(pos.size());
        for (auto i : pos)
            out.push_back(a[i]);
        return out;
    };
    bool holds = true;
    joint.for_each([&](const Assignment& a, const Rational& m) {
        if (!holds)
            return;
        const Rational& z = pz.prob(project(a, pos_z));
        if (z == 0)
            return;
        if (m * z != pxz.prob(project(a, pos_xz)) * pyz.prob(project(a, pos_yz)))
            holds = false;
    });
    return holds;
}

struct CiConsistency {
    bool consistent = true;
    std::optional<CiRelation> violation;
};

/// Membership test for the set of distributions satisfying g's observed CI
/// relations. Reports the first violated relation in enumeration order.
inline CiConsistency ci_consistent(const DiscreteDistribution& p, const CiSet& relations)
{
    if (p.name_set() != relations.scope())
        throw Error(ErrorCode::VariableMismatch, "distribution variables " + format_set(p.name_set()) +
                                                     " differ from observed nodes " + format_set(relations.scope()));
    for (const auto& r : relations)
        if (!ci_holds_in_distribution(p, r))
            return {false, r};
    return {};
}

inline CiConsistency ci_consistent(const DiscreteDistribution& p, const Gdag& g,
                                   std::optional<std::size_t> max_set_size = std::nullopt)
{
    if (p.name_set() != g.observed_nodes())
        throw Error(ErrorCode::VariableMismatch, "distribution variables " + format_set(p.name_set()) +
                                                     " differ from observed nodes " + format_set(g.observed_nodes()));
    return ci_consistent(p, observed_ci_relations(g, max_set_size));
}

} // namespace causalgap
