#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "causalgap/ci.hpp"
#include "causalgap/distribution.hpp"
#include "causalgap/error.hpp"
#include "causalgap/fine_grained.hpp"
#include "causalgap/graph.hpp"

namespace causalgap::catalog {

struct Property {
    std::string description;
    std::function<bool(const Gdag&)> check;
    /// Set for plain (non-)separation properties, for CI-syntax export.
    std::optional<std::pair<CiRelation, bool>> relation = std::nullopt;
};

struct CatalogEntry {
    std::string name;
    Gdag graph;
    std::string provenance;
    bool provisional = false;
    /// Expected classification, as "Interesting/<Method>" or "Inconclusive".
    std::optional<std::string> expected;
    std::vector<std::string> notes;
    std::vector<Property> properties;
    std::optional<DiscreteDistribution> fine_grained_witness;
};

struct PropertyFailure {
    std::string entry;
    std::string property;
};

namespace props {

inline Property dsep(NodeSet x, NodeSet y, NodeSet z, bool expected)
{
    std::string d = (expected ? "" : "not ") + std::string("d-separated: ") + format_set(x) + " and " + format_set(y) +
                    " given " + format_set(z);
    return {d, [=](const Gdag& g) { return d_separated(g, x, y, z) == expected; },
            std::pair{CiRelation(x, y, z), expected}};
}

inline Property observed_ci(const std::string& relation, bool expected)
{
    const CiRelation r = parse_ci(relation);
    return {(expected ? "implies " : "does not imply ") + format_ci(r), [=](const Gdag& g) {
                return d_separated(g, r.x, r.y, r.z) == expected;
            },
            std::pair{r, expected}};
}

inline Property observed_ci_count(std::size_t n)
{
    return {"exactly " + std::to_string(n) + " observed CI relations",
            [=](const Gdag& g) { return observed_ci_relations(g).size() == n; }};
}

inline Property esep(NodeSet x, NodeSet y, NodeSet z, NodeSet w, bool expected)
{
    return {(expected ? "" : "not ") + std::string("e-separated: ") + format_set(x) + " and " + format_set(y) +
                " given " + format_set(z) + " after deleting " + format_set(w),
            [=](const Gdag& g) { return e_separated(g, x, y, z, w) == expected; }};
}

inline Property excluded(NodeSet x, NodeSet y, NodeSet z, NodeSet w)
{
    return {"no relation " + format_set(x) + " _||_ " + format_set(y) + " | " + format_set(z) + "+S for S within " +
                format_set(w),
            [=](const Gdag& g) { return ci_excluded_for_all_subsets(g, x, y, z, w); }};
}

inline Property descends(const std::string& ancestor, const std::string& node, bool expected)
{
    return {node + (expected ? " descends from " : " does not descend from ") + ancestor,
            [=](const Gdag& g) { return (descendants(g, {ancestor}).count(node) != 0) == expected; }};
}

inline Property ancestors_include(const std::string& node, NodeSet expected)
{
    return {"ancestors of " + node + " include " + format_set(expected), [=](const Gdag& g) {
                const NodeSet a = ancestors(g, {node});
                return std::includes(a.begin(), a.end(), expected.begin(), expected.end());
            }};
}

inline Property ancestors_equal(const std::string& node, NodeSet expected)
{
    return {"ancestors of " + node + " are " + format_set(expected),
            [=](const Gdag& g) { return ancestors(g, {node}) == expected; }};
}

inline Property maximal_subsets(std::vector<NodeSet> expected)
{
    std::string d = "maximal connected subsets:";
    for (const auto& s : expected)
        d += " " + format_set(s);
    return {d, [=](const Gdag& g) { return maximal_connected_subsets(g) == expected; }};
}

inline Property canonical(bool expected)
{
    return {expected ? "canonical" : "not canonical", [=](const Gdag& g) { return is_canonical(g) == expected; }};
}

inline Property hidden_path(const std::string& x, const std::string& y, bool expected)
{
    return {(expected ? "hidden path " : "no hidden path ") + x + " -> " + y,
            [=](const Gdag& g) { return hidden_path_exists(g, x, y) == expected; }};
}

/// Directed path x -> ... -> y through latent nodes only (a direct arrow counts).
inline Property latent_free_path(const std::string& x, const std::string& y)
{
    return {"directed path " + x + " -> " + y + " with no observed intermediates",
            [=](const Gdag& g) { return g.has_edge(x, y) || hidden_path_exists(g, x, y); }};
}

inline Property skeleton_edges(std::vector<Edge> chords)
{
    std::string d = "skeleton chords:";
    for (const auto& [a, b] : chords)
        d += " " + a + "-" + b;
    return {d, [=](const Gdag& g) {
                Skeleton expected(g.observed_nodes());
                for (const auto& [a, b] : chords)
                    expected.add_edge(a, b);
                return skeleton(g) == expected;
            }};
}

inline Property skeleton_complete(bool expected)
{
    return {expected ? "complete skeleton" : "incomplete skeleton", [=](const Gdag& g) {
                const auto sk = skeleton(g);
                const std::size_t n = sk.nodes().size();
                return (sk.edges().size() == n * (n - 1) / 2) == expected;
            }};
}

inline Property witness_consistent(const std::string& name, DiscreteDistribution p)
{
    return {name + " satisfies every observed CI relation",
            [=](const Gdag& g) { return ci_consistent(p, g).consistent; }};
}

inline Property witness_violates(const std::string& name, DiscreteDistribution p, const std::string& relation)
{
    const CiRelation r = parse_ci(relation);
    return {name + " first violates " + format_ci(r), [=](const Gdag& g) {
                const auto c = ci_consistent(p, g);
                return !c.consistent && *c.violation == r;
            }};
}

} // namespace props

namespace detail {

inline Gdag build(std::vector<std::string> observed, std::vector<std::string> latent, std::vector<Edge> edges)
{
    GraphSpec spec;
    for (auto& o : observed)
        spec.nodes.push_back({std::move(o), true});
    for (auto& l : latent)
        spec.nodes.push_back({std::move(l), false});
    spec.edges = std::move(edges);
    return Gdag(spec);
}

/// Latent relations shared by the three graphs the fine-grained bound covers.
inline std::vector<Property> bound_relations()
{
    return {props::dsep({"D"}, {"E"}, {"C", "A"}, true), props::dsep({"D"}, {"F"}, {"B", "A"}, true),
            props::dsep({"B", "C", "D"}, {"A"}, {}, true), props::dsep({"B"}, {"C"}, {}, true)};
}

inline std::vector<CatalogEntry> make_entries()
{
    std::vector<CatalogEntry> out;

    {
        CatalogEntry e;
        e.name = "bicycle";
        e.graph = build({"G", "P", "H", "F", "B", "E"}, {"T"},
                        {{"G", "T"}, {"P", "T"}, {"T", "B"}, {"H", "F"}, {"F", "B"}});
        e.provenance = "Bicycle example: gears G and pedalling P act on the back wheel B through latent tension T; "
                       "handlebar H acts through the front wheel F; seat height E is isolated.";
        e.properties = {props::ancestors_include("B", {"G", "P", "T", "H", "F"}), props::ancestors_equal("E", {})};
        out.push_back(std::move(e));
    }
    {
        CatalogEntry e;
        e.name = "bell";
        e.graph = build({"A", "B", "X", "Y"}, {"U"}, {{"A", "X"}, {"B", "Y"}, {"U", "X"}, {"U", "Y"}});
        e.provenance = "Bell scenario: settings A, B; outcomes X, Y; shared latent source U.";
        e.expected = "Inconclusive";
        e.properties = {props::maximal_subsets({{"X", "Y"}}), props::observed_ci("A _||_ B", true),
                        props::observed_ci("A _||_ Y", true), props::observed_ci("B _||_ X", true),
                        props::observed_ci("X _||_ Y | A,B", false)};
        out.push_back(std::move(e));
    }
    {
        CatalogEntry e;
        e.name = "one-sided-bell";
        e.graph = build({"A", "X", "Y"}, {"U"}, {{"A", "X"}, {"U", "X"}, {"U", "Y"}});
        e.provenance = "Bell scenario with a single setting A; no signalling from A to Y.";
        e.properties = {props::dsep({"A"}, {"Y"}, {}, true)};
        out.push_back(std::move(e));
    }
    {
        CatalogEntry e;
        e.name = "triangle";
        e.graph = build({"A", "B", "C"}, {"U", "V", "W"},
                        {{"U", "A"}, {"U", "B"}, {"V", "B"}, {"V", "C"}, {"W", "A"}, {"W", "C"}});
        e.provenance = "Triangle scenario (graph #8 of Henson, Lal and Pusey, New J. Phys. 16, 113043 (2014)).";
        e.expected = "Inconclusive";
        e.properties = {props::observed_ci_count(0), props::skeleton_complete(true),
                        props::maximal_subsets({{"A", "B"}, {"A", "C"}, {"B", "C"}})};
        out.push_back(std::move(e));
    }
    {
        CatalogEntry e;
        e.name = "evans-fig4a";
        e.graph = build({"A", "C", "D", "E", "G"}, {"B", "F"},
                        {{"A", "C"}, {"A", "F"}, {"B", "C"}, {"B", "F"}, {"F", "D"}, {"F", "E"}, {"F", "G"},
                         {"C", "D"}});
        e.provenance = "Non-canonical GDAG illustrating canonical projection (after Evans, Bernoulli 22, 2016).";
        e.provisional = true;
        e.notes = {"Edge list reconstructed to match the stated projection: one facet {C,D,E,G}, B a hidden "
                   "common cause of E and C."};
        e.properties = {props::maximal_subsets({{"C", "D", "E", "G"}}), props::canonical(false),
                        props::hidden_path("B", "E", true), props::hidden_path("A", "D", true)};
        out.push_back(std::move(e));
    }
    {
        CatalogEntry e;
        e.name = "evans-fig4b";
        e.graph = build({"A", "C", "D", "E", "G"}, {"U_C_D_E_G"},
                        {{"A", "C"}, {"A", "D"}, {"A", "E"}, {"A", "G"}, {"C", "D"}, {"U_C_D_E_G", "C"},
                         {"U_C_D_E_G", "D"}, {"U_C_D_E_G", "E"}, {"U_C_D_E_G", "G"}});
        e.provenance = "Canonical form of evans-fig4a.";
        e.provisional = true;
        e.properties = {props::maximal_subsets({{"C", "D", "E", "G"}}), props::canonical(true)};
        out.push_back(std::move(e));
    }
    {
        CatalogEntry e;
        e.name = "hlp-15";
        e.graph = build({"A", "D", "E", "F"}, {"B", "C"},
                        {{"C", "D"}, {"C", "E"}, {"B", "D"}, {"B", "F"}, {"A", "E"}, {"A", "F"}});
        e.provenance = "Graph #15 of Henson, Lal and Pusey (2014).";
        e.provisional = true;
        e.expected = "Interesting/FineGrainedInequality";
        e.notes = {"Topology reconstructed from its stated properties, not transcribed: latent B, C feed D; C "
                   "feeds E, B feeds F; the setting A feeds E and F. Making A latent yields the triangle."};
        e.properties = bound_relations();
        e.properties.push_back(props::observed_ci("A _||_ D", true));
        e.properties.push_back(props::witness_consistent("tilde_p", tilde_p()));
        e.properties.push_back(props::witness_consistent("tilde_p_prime", tilde_p_prime()));
        e.fine_grained_witness = tilde_p();
        out.push_back(std::move(e));
    }
    {
        CatalogEntry e;
        e.name = "hlp-16";
        e.graph = build({"A", "D", "E", "F"}, {"B", "C", "G"},
                        {{"C", "D"}, {"C", "E"}, {"B", "D"}, {"B", "F"}, {"A", "E"}, {"A", "F"}, {"G", "E"},
                         {"G", "F"}});
        e.provenance = "Graph #16 of Henson, Lal and Pusey (2014).";
        e.provisional = true;
        e.expected = "Interesting/FineGrainedInequality";
        e.notes = {"Topology reconstructed: hlp-15 plus a latent G shared by E and F."};
        e.properties = bound_relations();
        e.properties.push_back(props::witness_consistent("tilde_p", tilde_p()));
        e.properties.push_back(props::witness_consistent("tilde_p_prime", tilde_p_prime()));
        e.fine_grained_witness = tilde_p();
        out.push_back(std::move(e));
    }
    {
        CatalogEntry e;
        e.name = "hlp-17";
        e.graph = build({"C", "D", "E", "F"}, {"A", "B"},
                        {{"A", "F"}, {"A", "C"}, {"B", "C"}, {"B", "E"}, {"D", "E"}, {"E", "F"}, {"C", "E"}});
        e.provenance = "Graph #17 of Henson, Lal and Pusey (2014).";
        e.provisional = true;
        e.expected = "Interesting/ESeparation";
        e.notes = {"Reconstructed from the paths F<-E<-D and F<-A->C<-B->E<-D plus an arrow C->E, which makes E "
                   "a descendant of C and lets Z be empty in the certificate."};
        e.properties = {props::dsep({"F"}, {"D"}, {"C"}, false),
                        props::dsep({"F"}, {"D"}, {"C", "E"}, false),
                        props::esep({"F"}, {"D"}, {"C"}, {"E"}, true),
                        props::esep({"F"}, {"D"}, {}, {"E"}, true),
                        props::excluded({"F"}, {"D"}, {"C"}, {"E"}),
                        props::excluded({"F"}, {"D"}, {}, {"E"}),
                        props::descends("E", "C", false),
                        props::descends("C", "E", true)};
        out.push_back(std::move(e));
    }
    {
        CatalogEntry e;
        e.name = "hlp-20";
        e.graph = build({"A", "D", "E", "F"}, {"B", "C"},
                        {{"A", "E"}, {"E", "F"}, {"B", "D"}, {"B", "F"}, {"C", "D"}, {"C", "E"}});
        e.provenance = "Graph #20 of Henson, Lal and Pusey (2014).";
        e.provisional = true;
        e.expected = "Interesting/FineGrainedInequality";
        e.notes = {"Topology reconstructed: as hlp-15 but A reaches F only through E, so (F _||_ A | E) holds and "
                   "tilde_p is excluded. tilde_p_prime, where E reveals A, is the registered witness.",
                   "Both e-separation certificates fail: their correlated witness breaks (A _||_ F | E).",
                   "(D _||_ F | B,A) fails: no graph with (F _||_ A | E) that admits tilde_p_prime can keep all four "
                   "latent relations, since the D-E dependence then reaches F through E. eq1 was checked "
                   "numerically on this graph instead."};
        e.properties = {props::dsep({"D"}, {"E"}, {"C", "A"}, true), props::dsep({"D"}, {"F"}, {"B", "A"}, false),
                        props::dsep({"B", "C", "D"}, {"A"}, {}, true), props::dsep({"B"}, {"C"}, {}, true)};
        e.properties.push_back(props::observed_ci("A _||_ D", true));
        e.properties.push_back(props::observed_ci("F _||_ A | E", true));
        e.properties.push_back(props::witness_violates("tilde_p", tilde_p(), "A _||_ F | E"));
        e.properties.push_back(props::witness_consistent("tilde_p_prime", tilde_p_prime()));
        e.fine_grained_witness = tilde_p_prime();
        out.push_back(std::move(e));
    }
    {
        CatalogEntry e;
        e.name = "hlp-21";
        e.graph = build({"A", "B", "C", "D"}, {"U", "V"},
                        {{"A", "B"}, {"B", "C"}, {"C", "D"}, {"U", "A"}, {"U", "C"}, {"V", "B"}, {"V", "D"}});
        e.provenance = "Graph #21 of Henson, Lal and Pusey (2014).";
        e.provisional = true;
        e.expected = "Interesting/SkeletonMethod";
        e.notes = {"Stand-in with the properties the text relies on: no observed CI relation and an incomplete "
                   "skeleton (A and D never adjacent), so the complete DAG is a comparator."};
        e.properties = {props::observed_ci_count(0), props::skeleton_complete(false),
                        props::skeleton_edges({{"A", "B"}, {"A", "C"}, {"B", "C"}, {"B", "D"}, {"C", "D"}}),
                        props::esep({"A"}, {"D"}, {}, {"C"}, true), props::excluded({"A"}, {"D"}, {}, {"C"})};
        out.push_back(std::move(e));
    }
    {
        CatalogEntry e;
        e.name = "appendix-8";
        e.graph = build({"X", "Y", "Z", "W", "A"}, {"U1", "U2", "U3"},
                        {{"A", "W"}, {"A", "Y"}, {"W", "Y"}, {"X", "Z"}, {"Z", "Y"}, {"U1", "A"}, {"U1", "W"},
                         {"U2", "W"}, {"U2", "Z"}, {"U3", "X"}, {"U3", "Z"}});
        e.provenance = "Eight-node graph on which e-separation applies but no skeleton comparator exists.";
        e.provisional = true;
        e.expected = "Interesting/ESeparation";
        e.notes = {"Chosen by exhaustive search over canonical graphs on the chord skeleton: every chord deletion is "
                   "non-viable, every non-chord pair is separated, and (X,Y,Z,W) is a certificate.",
                   "The published property list is not jointly satisfiable here. (X _||_ Y | Z,A) is given up; the "
                   "graph implies (X _||_ Y | A,W,Z) instead.",
                   "The text says Z is descended from W; the certificate needs the opposite, which is encoded.",
                   "No certificate admits a CI-consistent witness (correlated or coin-tuple), so classify stays "
                   "Inconclusive."};
        e.properties = {props::skeleton_edges({{"X", "Z"}, {"Z", "Y"}, {"Z", "W"}, {"A", "Y"}, {"A", "W"}, {"Y", "W"}}),
                        props::observed_ci("X _||_ W", true),
                        props::observed_ci("X _||_ Y | Z", false),
                        props::observed_ci("X _||_ Y | Z,W", false),
                        props::observed_ci("Y _||_ W | A,Z", false),
                        props::latent_free_path("Z", "Y"),
                        props::esep({"X"}, {"Y"}, {"Z"}, {"W"}, true),
                        props::excluded({"X"}, {"Y"}, {"Z"}, {"W"}),
                        props::descends("W", "Z", false),
                        props::canonical(true)};
        out.push_back(std::move(e));
    }
    return out;
}

} // namespace detail

inline const std::vector<CatalogEntry>& entries()
{
    static const std::vector<CatalogEntry> all = detail::make_entries();
    return all;
}

inline std::vector<std::string> list()
{
    std::vector<std::string> out;
    for (const auto& e : entries())
        out.push_back(e.name);
    return out;
}

inline const CatalogEntry& get(const std::string& name)
{
    for (const auto& e : entries())
        if (e.name == name)
            return e;
    throw Error(ErrorCode::UnknownEntry, "no catalog entry '" + name + "'");
}

/// Runs every entry's property list; returns the failures.
inline std::vector<PropertyFailure> check_properties()
{
    std::vector<PropertyFailure> out;
    for (const auto& e : entries())
        for (const auto& p : e.properties)
            if (!p.check(e.graph))
                out.push_back({e.name, p.description});
    return out;
}

/// Property list in CI syntax: separation properties as relations ("!" for
/// must-not-hold), everything else as comments.
inline std::string export_properties(const CatalogEntry& e)
{
    std::string out = "# " + e.name + "\n";
    for (const auto& p : e.properties) {
        if (p.relation)
            out += (p.relation->second ? "" : "! ") + format_ci(p.relation->first) + "\n";
        else
            out += "# " + p.description + "\n";
    }
    return out;
}

} // namespace causalgap::catalog
