#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "causalgap/catalog.hpp"
#include "causalgap/ci.hpp"
#include "causalgap/distribution.hpp"
#include "causalgap/entropy.hpp"
#include "causalgap/error.hpp"
#include "causalgap/fine_grained.hpp"
#include "causalgap/graph.hpp"

namespace causalgap {

enum class Status { Interesting, Inconclusive };
enum class Method { SkeletonMethod, ESeparation, FineGrainedInequality, None };

inline std::string to_string(Status s) { return s == Status::Interesting ? "Interesting" : "Inconclusive"; }

inline std::string to_string(Method m)
{
    switch (m) {
    case Method::SkeletonMethod: return "SkeletonMethod";
    case Method::ESeparation: return "ESeparation";
    case Method::FineGrainedInequality: return "FineGrainedInequality";
    case Method::None: return "None";
    }
    return "None";
}

/// A distribution satisfying the graph's observed CI relations but violating
/// a constraint every classical model on the graph obeys.
struct Witness {
    DiscreteDistribution distribution;
    std::string violated_constraint;
    double lhs = 0.0;
    double rhs = 0.0;
};

struct EsepCertificate {
    NodeSet x, y, z, w;

    friend bool operator==(const EsepCertificate&, const EsepCertificate&) = default;
};

inline std::string format_certificate(const EsepCertificate& c)
{
    return "X=" + format_set(c.x) + " Y=" + format_set(c.y) + " Z=" + format_set(c.z) + " W=" + format_set(c.w);
}

struct Verdict {
    Status status = Status::Inconclusive;
    Method method = Method::None;
    std::optional<Witness> witness;
    std::optional<EsepCertificate> certificate;
    std::vector<std::string> trace;

    std::string detail() const
    {
        std::string out;
        for (const auto& line : trace)
            out += (out.empty() ? "" : "; ") + line;
        return out;
    }

    /// One-line summary, e.g. "Interesting (e-separation: X={F} ...)".
    std::string summary() const
    {
        if (status == Status::Inconclusive)
            return "Inconclusive";
        switch (method) {
        case Method::SkeletonMethod: return "Interesting (skeleton method)";
        case Method::ESeparation: return "Interesting (e-separation: " + format_certificate(*certificate) + ")";
        case Method::FineGrainedInequality:
            return "Interesting (fine-grained inequality " + witness->violated_constraint + ")";
        case Method::None: break;
        }
        return "Interesting";
    }
};

// ---------------------------------------------------------------------------
// Skeleton method

struct SkeletonComparison {
    bool interesting = false;
    std::string reason;
};

/// Compares g against a comparator k whose classical and CI-defined models
/// the caller asserts to coincide. Only the checkable premises are verified.
inline SkeletonComparison skeleton_method(const Gdag& g, const Gdag& k,
                                          std::optional<std::size_t> max_set_size = std::nullopt)
{
    if (g.observed_nodes() != k.observed_nodes())
        throw Error(ErrorCode::NodeMismatch, "comparator observes " + format_set(k.observed_nodes()) +
                                                 ", graph observes " + format_set(g.observed_nodes()));
    if (observed_ci_relations(g, max_set_size) != observed_ci_relations(k, max_set_size))
        return {false, "observed CI relations differ from the comparator's"};
    if (skeleton(g) == skeleton(k))
        return {false, "equal skeletons"};
    return {true, "same observed CI relations, different skeletons"};
}

/// The complete DAG on the observed nodes (arrows follow label order), or
/// nothing when g implies any observed CI relation.
inline std::optional<Gdag> complete_dag_comparator(const Gdag& g,
                                                   std::optional<std::size_t> max_set_size = std::nullopt)
{
    if (!observed_ci_relations(g, max_set_size).empty())
        return std::nullopt;
    const NodeSet obs = g.observed_nodes();
    const std::vector<std::string> labels(obs.begin(), obs.end());
    GraphSpec spec;
    for (const auto& l : labels)
        spec.nodes.push_back({l, true});
    for (std::size_t i = 0; i < labels.size(); ++i)
        for (std::size_t j = i + 1; j < labels.size(); ++j)
            spec.edges.emplace_back(labels[i], labels[j]);
    return Gdag(spec);
}

// ---------------------------------------------------------------------------
// e-separation

struct EsepCaps {
    std::size_t max_set_size = max_nodes;
    std::size_t max_total_size = max_nodes;
};

struct EsepSearchResult {
    /// First certificate in search order.
    std::optional<EsepCertificate> certificate;
    /// Every certificate, in search order.
    std::vector<EsepCertificate> certificates;
    std::size_t tuples_examined = 0;
    /// Tuples where deleting w yields a separation not implied in g,
    /// whether or not the descent premise holds.
    std::size_t deletion_induced = 0;
};

namespace detail {

struct EsepCandidate {
    Mask x, y, z, w;
    std::size_t non_singletons, total, xy;
    NodeSet sx, sy, sz, sw;

    auto key() const { return std::tie(non_singletons, total, xy, sx, sy, sz, sw); }
};

} // namespace detail

/// Certificates are tried with all-singleton tuples first, then by total
/// size, then |x|+|y|, then lexicographically on (x, y, z, w). x <= y.
inline EsepSearchResult esep_search_detailed(const Gdag& g, const EsepCaps& caps = {})
{
    const Mask obs = g.observed_mask();
    std::vector<std::size_t> idx;
    for_each_bit(obs, [&](std::size_t i) { idx.push_back(i); });
    std::vector<detail::EsepCandidate> cands;
    // Assign each observed node to x, y, z, w or none (base-5 counter).
    std::vector<int> role(idx.size(), 0);
    while (true) {
        Mask m[5] = {0, 0, 0, 0, 0};
        for (std::size_t k = 0; k < idx.size(); ++k)
            m[role[k]] |= bit(idx[k]);
        const Mask x = m[1], y = m[2], z = m[3], w = m[4];
        if (x != 0 && y != 0 && w != 0) {
            const std::size_t sizes[4] = {static_cast<std::size_t>(popcount(x)), static_cast<std::size_t>(popcount(y)),
                                          static_cast<std::size_t>(popcount(z)), static_cast<std::size_t>(popcount(w))};
            const std::size_t total = sizes[0] + sizes[1] + sizes[2] + sizes[3];
            const bool within = std::all_of(std::begin(sizes), std::end(sizes),
                                            [&](std::size_t s) { return s <= caps.max_set_size; }) &&
                                total <= caps.max_total_size;
            NodeSet sx = g.set(x), sy = g.set(y);
            if (within && sx < sy) {
                const auto ns = static_cast<std::size_t>(std::count_if(std::begin(sizes), std::end(sizes),
                                                                       [](std::size_t s) { return s != 1; }));
                cands.push_back({x, y, z, w, ns, total, sizes[0] + sizes[1], std::move(sx), std::move(sy), g.set(z),
                                 g.set(w)});
            }
        }
        std::size_t k = 0;
        while (k < role.size() && ++role[k] == 5)
            role[k++] = 0;
        if (k == role.size())
            break;
    }
    std::sort(cands.begin(), cands.end(), [](const auto& a, const auto& b) { return a.key() < b.key(); });

    EsepSearchResult out;
    for (const auto& c : cands) {
        ++out.tuples_examined;
        if (!e_separated_mask(g, c.x, c.y, c.z, c.w) || !ci_excluded_mask(g, c.x, c.y, c.z, c.w))
            continue;
        ++out.deletion_induced;
        if ((descendants_mask(g, c.w) & c.z) != 0)
            continue;
        out.certificates.push_back(EsepCertificate{c.sx, c.sy, c.sz, c.sw});
    }
    if (!out.certificates.empty())
        out.certificate = out.certificates.front();
    return out;
}

inline std::optional<EsepCertificate> esep_search(const Gdag& g, const EsepCaps& caps = {})
{
    return esep_search_detailed(g, caps).certificate;
}

/// True iff `c` meets every premise of the e-separation method on g.
inline bool certificate_valid(const Gdag& g, const EsepCertificate& c)
{
    const Mask x = g.mask(c.x), y = g.mask(c.y), z = g.mask(c.z), w = g.mask(c.w);
    const Mask obs = g.observed_mask();
    if (x == 0 || y == 0 || w == 0 || ((x | y | z | w) & ~obs) != 0)
        return false;
    if ((x & y) || (x & z) || (x & w) || (y & z) || (y & w) || (z & w))
        return false;
    return (descendants_mask(g, w) & z) == 0 && e_separated_mask(g, x, y, z, w) && ci_excluded_mask(g, x, y, z, w);
}

/// x and y perfectly correlated and uniform over `cardinality` values, every
/// other observed variable fixed at 0.
/// Sufficient test for a violation of the e-separation constraint: W is a
/// function of Z and (X _||_ Y | Z) fails. On each Z value the only section
/// carrying mass is then P itself, so no compatible distribution can make X
/// and Y independent.
inline bool violates_esep_constraint(const DiscreteDistribution& p, const EsepCertificate& c)
{
    const NodeSet zw = set_union(c.z, c.w);
    const DiscreteDistribution m = marginalize(p, zw);
    std::vector<std::size_t> zpos, wpos;
    for (std::size_t i = 0; i < m.arity(); ++i)
        (c.z.count(m.variables()[i].name) ? zpos : wpos).push_back(i);
    std::map<Assignment, Assignment> w_of_z;
    bool functional = true;
    m.for_each([&](const Assignment& a, const Rational& mass) {
        if (mass == 0 || !functional)
            return;
        Assignment za, wa;
        for (auto i : zpos)
            za.push_back(a[i]);
        for (auto i : wpos)
            wa.push_back(a[i]);
        auto [it, fresh] = w_of_z.emplace(za, wa);
        if (!fresh && it->second != wa)
            functional = false;
    });
    return functional && !ci_holds_in_distribution(p, CiRelation(c.x, c.y, c.z));
}

namespace detail {

/// Observed node i is the tuple of the fair coins in bits[i]; then
/// (X _||_ Y | Z) holds exactly when every coin shared by X and Y is in Z.
inline Mask coins(const std::vector<Mask>& bits, Mask nodes)
{
    Mask out = 0;
    for_each_bit(nodes, [&](std::size_t i) { out |= bits[i]; });
    return out;
}

inline DiscreteDistribution coin_distribution(const Gdag& g, const std::vector<Mask>& bits, std::size_t n_coins)
{
    std::vector<Variable> vars;
    std::vector<std::size_t> nodes;
    for (std::size_t i = 0; i < g.size(); ++i)
        if (g.observed(i)) {
            vars.push_back({g.label(i), std::max<std::size_t>(2, std::size_t{1} << popcount(bits[i]))});
            nodes.push_back(i);
        }
    std::map<Assignment, Rational> rows;
    const Rational q(1, static_cast<long>(std::size_t{1} << n_coins));
    for (Mask toss = 0; toss < bit(n_coins); ++toss) {
        Assignment a;
        for (auto i : nodes) {
            std::size_t v = 0, k = 0;
            for_each_bit(bits[i], [&](std::size_t b) { v |= static_cast<std::size_t>(contains(toss, b)) << k++; });
            a.push_back(v);
        }
        rows[a] += q;
    }
    return DiscreteDistribution::from_rows(vars, {rows.begin(), rows.end()});
}

} // namespace detail

/// A distribution that satisfies g's observed CI relations and violates the
/// e-separation constraint of the certificate. Tries X, Y perfectly
/// correlated with every other node fixed first; if that breaks a relation
/// with a different conditioning set, searches coin-tuple distributions with
/// up to three coins. Throws InvalidCertificate when neither works.
inline Witness esep_witness(const Gdag& g, const EsepCertificate& c, std::size_t cardinality = 2,
                            std::optional<std::size_t> max_set_size = std::nullopt)
{
    if (cardinality < 2)
        throw Error(ErrorCode::InvalidCertificate, "witness cardinality must be at least 2");
    if (!certificate_valid(g, c))
        throw Error(ErrorCode::InvalidCertificate, "certificate premises do not hold: " + format_certificate(c));
    auto finish = [&](DiscreteDistribution p) {
        Witness out{std::move(p), "e-separation constraint", 0.0, 0.0};
        out.lhs = conditional_mutual_information(out.distribution, c.x, c.y, c.z);
        return out;
    };

    std::vector<Variable> vars;
    for (std::size_t i = 0; i < g.size(); ++i)
        if (g.observed(i))
            vars.push_back({g.label(i), cardinality});
    const NodeSet correlated = set_union(c.x, c.y);
    std::vector<std::pair<Assignment, Rational>> rows;
    for (std::size_t v = 0; v < cardinality; ++v) {
        Assignment a;
        for (const auto& var : vars)
            a.push_back(correlated.count(var.name) ? v : 0);
        rows.emplace_back(a, Rational(1, static_cast<long>(cardinality)));
    }
    DiscreteDistribution simple = DiscreteDistribution::from_rows(vars, rows);
    const CiSet relations = observed_ci_relations(g, max_set_size);
    const auto check = ci_consistent(simple, relations);
    if (check.consistent)
        return finish(std::move(simple));

    std::vector<std::tuple<Mask, Mask, Mask>> rel;
    for (const auto& r : relations)
        rel.emplace_back(g.mask(r.x), g.mask(r.y), g.mask(r.z));
    const Mask mx = g.mask(c.x), my = g.mask(c.y), mz = g.mask(c.z), mw = g.mask(c.w);
    std::vector<std::size_t> obs;
    for_each_bit(g.observed_mask(), [&](std::size_t i) { obs.push_back(i); });
    for (std::size_t n_coins = 1; n_coins <= 3; ++n_coins) {
        const Mask per_node = bit(n_coins);
        std::vector<Mask> bits(g.size(), 0);
        std::vector<Mask> counter(obs.size(), 0);
        while (true) {
            for (std::size_t k = 0; k < obs.size(); ++k)
                bits[obs[k]] = counter[k];
            const Mask cz = detail::coins(bits, mz);
            const bool violating = (detail::coins(bits, mw) & ~cz) == 0 &&
                                   (detail::coins(bits, mx) & detail::coins(bits, my) & ~cz) != 0;
            if (violating && std::all_of(rel.begin(), rel.end(), [&](const auto& r) {
                    const auto& [rx, ry, rz] = r;
                    return (detail::coins(bits, rx) & detail::coins(bits, ry) & ~detail::coins(bits, rz)) == 0;
                })) {
                DiscreteDistribution p = detail::coin_distribution(g, bits, n_coins);
                // The coin rules are exact; re-check anyway so a witness is never unverified.
                if (ci_consistent(p, relations).consistent && violates_esep_constraint(p, c))
                    return finish(std::move(p));
            }
            std::size_t k = 0;
            while (k < counter.size() && ++counter[k] == per_node)
                counter[k++] = 0;
            if (k == counter.size())
                break;
        }
    }
    throw Error(ErrorCode::InvalidCertificate, "no witness found; the correlated witness violates the graph's relation " +
                                                   format_ci(*check.violation));
}

// ---------------------------------------------------------------------------
// Skeleton viability

struct ViabilityCaps {
    std::size_t max_observed = 5;
    std::size_t max_candidates = 5'000'000;
};

struct ViabilityResult {
    bool viable = false;
    std::optional<Gdag> witness;
    /// For non-viable skeletons: a relation on which every candidate
    /// disagrees with the target, when one exists.
    std::optional<CiRelation> conflict;
    bool conflict_in_target = false; // true: required but never implied
    std::size_t candidates = 0;
    bool exhausted = true; // false when the candidate cap stopped the search
};

namespace detail {

/// Indexes every canonical relation over `nodes` (x < y as masks).
struct TripleIndex {
    std::vector<std::tuple<Mask, Mask, Mask>> triples;
    std::vector<CiRelation> relations;
};

inline TripleIndex index_triples(const Gdag& g)
{
    TripleIndex t;
    for_each_observed_triple(g, max_nodes, [&](Mask x, Mask y, Mask z) {
        t.triples.emplace_back(x, y, z);
        t.relations.emplace_back(g.set(x), g.set(y), g.set(z));
    });
    // Evaluate in relation order so the first disagreement is the smallest.
    std::vector<std::size_t> order(t.triples.size());
    for (std::size_t i = 0; i < order.size(); ++i)
        order[i] = i;
    std::sort(order.begin(), order.end(), [&](auto a, auto b) { return t.relations[a] < t.relations[b]; });
    TripleIndex sorted;
    for (auto i : order) {
        sorted.triples.push_back(t.triples[i]);
        sorted.relations.push_back(t.relations[i]);
    }
    return sorted;
}

} // namespace detail

/// Enumerates canonical GDAGs whose skeleton is `sk`: every skeleton edge is
/// an arrow (either direction) or lies inside a latent facet, facets are
/// pairwise incomparable cliques of size >= 2, and the arrows are acyclic.
/// Viable iff some candidate implies exactly `target`. A reported conflict
/// separates `prefer` when such a conflict exists.
inline ViabilityResult skeleton_viability(const Skeleton& sk, const CiSet& target, bool find_conflict = false,
                                          const ViabilityCaps& caps = {}, std::optional<Edge> prefer = std::nullopt)
{
    const std::vector<std::string> labels(sk.nodes().begin(), sk.nodes().end());
    const std::size_t n = labels.size();
    if (n > caps.max_observed)
        throw Error(ErrorCode::TooLarge, "skeleton viability is limited to " + std::to_string(caps.max_observed) +
                                             " observed nodes");
    if (target.scope() != sk.nodes())
        throw Error(ErrorCode::NodeMismatch, "target CI scope differs from the skeleton's nodes");
    std::map<std::string, std::size_t> pos;
    for (std::size_t i = 0; i < n; ++i)
        pos[labels[i]] = i;
    std::vector<std::pair<std::size_t, std::size_t>> edges;
    std::vector<Mask> adj(n, 0);
    for (const auto& [a, b] : sk.edges()) {
        edges.emplace_back(pos[a], pos[b]);
        adj[pos[a]] |= bit(pos[b]);
        adj[pos[b]] |= bit(pos[a]);
    }
    std::vector<Mask> cliques;
    for (Mask m = 1; m < bit(n); ++m) {
        if (popcount(m) < 2)
            continue;
        bool clique = true;
        for_each_bit(m, [&](std::size_t i) {
            if ((m & ~bit(i) & ~adj[i]) != 0)
                clique = false;
        });
        if (clique)
            cliques.push_back(m);
    }
    // Antichains of cliques.
    std::vector<std::vector<Mask>> antichains;
    std::vector<Mask> current;
    auto extend = [&](auto&& self, std::size_t from) -> void {
        antichains.push_back(current);
        for (std::size_t k = from; k < cliques.size(); ++k) {
            bool ok = true;
            for (Mask f : current)
                if ((f & cliques[k]) == f || (f & cliques[k]) == cliques[k])
                    ok = false;
            if (!ok)
                continue;
            current.push_back(cliques[k]);
            self(self, k + 1);
            current.pop_back();
        }
    };
    extend(extend, 0);

    // Relation table over a template graph with the skeleton's node order.
    GraphSpec base;
    for (const auto& l : labels)
        base.nodes.push_back({l, true});
    const detail::TripleIndex index = detail::index_triples(Gdag(base));
    std::vector<bool> wanted(index.relations.size());
    for (std::size_t i = 0; i < wanted.size(); ++i)
        wanted[i] = target.contains(index.relations[i]);

    ViabilityResult out;
    std::vector<bool> always_disagree(index.relations.size(), true);
    std::vector<bool> disagree(index.relations.size());

    for (const auto& facets : antichains) {
        std::vector<int> choices; // per edge: number of options
        std::vector<bool> covered(edges.size(), false);
        for (std::size_t e = 0; e < edges.size(); ++e)
            for (Mask f : facets)
                if (contains(f, edges[e].first) && contains(f, edges[e].second))
                    covered[e] = true;
        // option 0: a -> b, 1: b -> a, 2: no arrow (only when covered)
        std::vector<int> opt(edges.size(), 0);
        while (true) {
            GraphSpec spec = base;
            std::vector<Mask> children(n, 0);
            for (std::size_t e = 0; e < edges.size(); ++e) {
                const auto [a, b] = edges[e];
                if (opt[e] == 0)
                    children[a] |= bit(b);
                else if (opt[e] == 1)
                    children[b] |= bit(a);
            }
            if (!detail::find_cycle(children)) {
                for (std::size_t a = 0; a < n; ++a)
                    for_each_bit(children[a], [&](std::size_t b) { spec.edges.emplace_back(labels[a], labels[b]); });
                NodeSet taken(labels.begin(), labels.end());
                for (Mask f : facets) {
                    NodeSet members;
                    for_each_bit(f, [&](std::size_t i) { members.insert(labels[i]); });
                    const std::string name = facet_latent_name(members, taken);
                    taken.insert(name);
                    spec.nodes.push_back({name, false});
                    for (const auto& m : members)
                        spec.edges.emplace_back(name, m);
                }
                const Gdag cand(spec);
                ++out.candidates;
                bool match = true;
                for (std::size_t i = 0; i < index.triples.size(); ++i) {
                    const auto [x, y, z] = index.triples[i];
                    disagree[i] = d_separated_mask(cand, x, y, z) != wanted[i];
                    if (disagree[i]) {
                        match = false;
                        if (!find_conflict)
                            break;
                    }
                }
                if (match) {
                    out.viable = true;
                    out.witness = cand;
                    out.conflict.reset();
                    return out;
                }
                if (find_conflict)
                    for (std::size_t i = 0; i < disagree.size(); ++i)
                        always_disagree[i] = always_disagree[i] && disagree[i];
                if (out.candidates >= caps.max_candidates) {
                    out.exhausted = false;
                    return out;
                }
            }
            std::size_t e = 0;
            while (e < edges.size()) {
                const int limit = covered[e] ? 3 : 2;
                if (++opt[e] < limit)
                    break;
                opt[e] = 0;
                ++e;
            }
            if (e == edges.size())
                break;
        }
    }
    if (find_conflict && out.candidates > 0) {
        auto separates = [&](const CiRelation& r) {
            const auto& [a, b] = *prefer;
            return (r.x.count(a) && r.y.count(b)) || (r.x.count(b) && r.y.count(a));
        };
        for (int pass = prefer ? 0 : 1; pass < 2 && !out.conflict; ++pass) {
            for (std::size_t i = 0; i < always_disagree.size(); ++i) {
                if (always_disagree[i] && (pass == 1 || separates(index.relations[i]))) {
                    out.conflict = index.relations[i];
                    out.conflict_in_target = wanted[i];
                    break;
                }
            }
        }
    }
    return out;
}

struct ChordReport {
    Edge chord;
    bool viable_when_deleted = false;
    std::optional<CiRelation> conflict;
    bool conflict_in_target = false;
};

/// For each skeleton chord of g: can a GDAG whose skeleton lacks that chord
/// reproduce g's observed CI relations?
inline std::vector<ChordReport> chord_deletion_report(const Gdag& g, const ViabilityCaps& caps = {})
{
    if (static_cast<std::size_t>(popcount(g.observed_mask())) > caps.max_observed)
        throw Error(ErrorCode::TooLarge, "chord analysis is limited to " + std::to_string(caps.max_observed) +
                                             " observed nodes");
    const CiSet target = observed_ci_relations(g);
    const Skeleton sk = skeleton(g);
    std::vector<ChordReport> out;
    for (const auto& chord : sk.edges()) {
        Skeleton reduced = sk;
        reduced.remove_edge(chord.first, chord.second);
        const auto r = skeleton_viability(reduced, target, true, caps, chord);
        out.push_back({chord, r.viable, r.conflict, r.conflict_in_target});
    }
    return out;
}

struct NonChordReport {
    Edge pair;
    std::optional<CiRelation> blocking; // a target relation separating the pair
};

/// For each observed pair not adjacent in g's skeleton: the first relation of
/// g separating the two, which any skeleton joining them would violate.
inline std::vector<NonChordReport> chord_addition_report(const Gdag& g,
                                                         std::optional<std::size_t> max_set_size = std::nullopt)
{
    const CiSet target = observed_ci_relations(g, max_set_size);
    const Skeleton sk = skeleton(g);
    std::vector<NonChordReport> out;
    const NodeSet obs = g.observed_nodes();
    for (auto a = obs.begin(); a != obs.end(); ++a) {
        for (auto b = std::next(a); b != obs.end(); ++b) {
            if (sk.adjacent(*a, *b))
                continue;
            NonChordReport r{{*a, *b}, std::nullopt};
            for (const auto& rel : target) {
                if ((rel.x.count(*a) && rel.y.count(*b)) || (rel.x.count(*b) && rel.y.count(*a))) {
                    r.blocking = rel;
                    break;
                }
            }
            out.push_back(r);
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Classification pipeline

struct FineGrainedRegistration {
    std::string entry;
    Gdag graph;
    DiscreteDistribution witness;
    FineGrainedInequality inequality;
};

/// Witnesses attached to catalog graphs.
inline std::vector<FineGrainedRegistration> catalog_fine_grained_registry()
{
    std::vector<FineGrainedRegistration> out;
    for (const auto& name : catalog::list()) {
        const auto& e = catalog::get(name);
        if (e.fine_grained_witness)
            out.push_back({e.name, e.graph, *e.fine_grained_witness, eq1_inequality()});
    }
    return out;
}

struct ClassifyOptions {
    std::optional<Gdag> comparator;
    std::optional<std::size_t> max_set_size;
    std::size_t witness_cardinality = 2;
    EsepCaps esep_caps;
    /// Defaults to the catalog registry when unset.
    std::optional<std::vector<FineGrainedRegistration>> fine_grained;
};

inline Verdict classify(const Gdag& g, const ClassifyOptions& options = {})
{
    Verdict v;

    // Skeleton method against a supplied or automatic comparator.
    std::optional<Gdag> k = options.comparator;
    if (!k)
        k = complete_dag_comparator(g, options.max_set_size);
    if (k) {
        const auto cmp = skeleton_method(g, *k, options.max_set_size);
        if (cmp.interesting) {
            v.status = Status::Interesting;
            v.method = Method::SkeletonMethod;
            v.trace.push_back("skeleton method: " + cmp.reason);
            return v;
        }
        v.trace.push_back("skeleton method: " + cmp.reason);
    } else {
        v.trace.push_back("skeleton method: no comparator (observed CI relations are non-empty)");
    }

    // e-separation.
    const auto search = esep_search_detailed(g, options.esep_caps);
    // A certificate only helps if its witness respects every observed CI
    // relation, which depends on relations outside the certificate.
    std::optional<std::string> first_failure;
    for (const auto& cert : search.certificates) {
        try {
            Witness w = esep_witness(g, cert, options.witness_cardinality, options.max_set_size);
            v.status = Status::Interesting;
            v.method = Method::ESeparation;
            v.certificate = cert;
            v.witness = std::move(w);
            v.trace.push_back("e-separation: " + format_certificate(cert));
            return v;
        } catch (const Error& e) {
            if (!first_failure)
                first_failure = format_certificate(cert) + ": " + e.what();
        }
    }
    if (first_failure)
        v.trace.push_back("e-separation: " + std::to_string(search.certificates.size()) +
                          " certificate(s), none with a CI-consistent witness (first " + *first_failure + ")");
    if (search.deletion_induced == 0)
        v.trace.push_back("e-separation: no deletion-induced CI relation");
    else if (search.certificates.empty())
        v.trace.push_back("e-separation: every deletion-induced CI relation conditions on a descendant of W");

    // Fine-grained inequalities registered for this graph.
    const auto registry = options.fine_grained ? *options.fine_grained : catalog_fine_grained_registry();
    bool registered = false;
    for (const auto& reg : registry) {
        if (!isomorphic_fixing_observed(reg.graph, g))
            continue;
        registered = true;
        const auto check = ci_consistent(reg.witness, g, options.max_set_size);
        if (!check.consistent) {
            v.trace.push_back("fine-grained: " + reg.entry + " witness violates " + format_ci(*check.violation));
            continue;
        }
        const auto eval = evaluate(reg.inequality, reg.witness, &g);
        if (!eval.violated()) {
            v.trace.push_back("fine-grained: " + reg.entry + " witness satisfies " + reg.inequality.name);
            continue;
        }
        v.status = Status::Interesting;
        v.method = Method::FineGrainedInequality;
        v.witness = Witness{reg.witness, reg.inequality.name, eval.lhs, eval.rhs};
        v.trace.push_back("fine-grained: " + reg.inequality.name + " violated by registered witness");
        return v;
    }
    if (!registered)
        v.trace.push_back("fine-grained: no registered witness");
    return v;
}

} // namespace causalgap
