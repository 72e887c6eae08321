#include <gtest/gtest.h>

#include "causalgap/catalog.hpp"
#include "causalgap/interestingness.hpp"
#include "causalgap/model.hpp"
#include "causalgap/report.hpp"

#include "helpers.hpp"

using namespace causalgap;
using testing_support::make_graph;

namespace {

const Gdag& graph(const char* name) { return catalog::get(name).graph; }

std::vector<std::string> small_entries()
{
    std::vector<std::string> out;
    for (const auto& e : catalog::entries())
        if (popcount(e.graph.observed_mask()) <= 6)
            out.push_back(e.name);
    return out;
}

} // namespace

TEST(SkeletonMethod, ComparatorPremises)
{
    EXPECT_ERROR_CODE(skeleton_method(graph("bell"), graph("triangle")), ErrorCode::NodeMismatch);
    const auto k = complete_dag_comparator(graph("triangle"));
    ASSERT_TRUE(k.has_value());
    EXPECT_EQ(skeleton_method(graph("triangle"), *k).reason, "equal skeletons");
    EXPECT_FALSE(complete_dag_comparator(graph("bell")).has_value());
}

TEST(SkeletonMethod, IncompleteSkeletonWithoutCiIsInteresting)
{
    const Gdag& g = graph("hlp-21");
    const auto k = complete_dag_comparator(g);
    ASSERT_TRUE(k.has_value());
    const auto cmp = skeleton_method(g, *k);
    EXPECT_TRUE(cmp.interesting);
    const Verdict v = classify(g);
    EXPECT_EQ(v.status, Status::Interesting);
    EXPECT_EQ(v.method, Method::SkeletonMethod);
}

TEST(SkeletonMethod, UserComparatorWithDifferentCiIsRejected)
{
    const Gdag& g = graph("hlp-21");
    const Gdag chain = make_graph({"A", "B", "C", "D"}, {}, {{"A", "B"}, {"B", "C"}, {"C", "D"}});
    EXPECT_EQ(skeleton_method(g, chain).reason, "observed CI relations differ from the comparator's");
}

TEST(ESearch, Graph17FindsTheDocumentedCertificate)
{
    const auto r = esep_search_detailed(graph("hlp-17"));
    ASSERT_TRUE(r.certificate.has_value());
    EXPECT_EQ(format_certificate(*r.certificate), "X={D} Y={F} Z={C} W={E}");
    EXPECT_EQ(r.certificates.front(), *r.certificate);
    EXPECT_GT(r.deletion_induced, 0u);
    EXPECT_FALSE(certificate_valid(graph("hlp-17"), EsepCertificate{{"D"}, {"F"}, {"E"}, {"C"}}));
}

TEST(ESearch, NoCertificatesForNegativeControls)
{
    for (const char* name : {"triangle", "bell"}) {
        const auto r = esep_search_detailed(graph(name));
        EXPECT_FALSE(r.certificate.has_value()) << name;
        EXPECT_EQ(r.deletion_induced, 0u) << name;
    }
}

TEST(ESearch, CapsLimitTheSearch)
{
    EsepCaps caps;
    caps.max_total_size = 3;
    const auto r = esep_search_detailed(graph("hlp-17"), caps);
    ASSERT_EQ(r.certificates.size(), 1u);
    EXPECT_EQ(format_certificate(r.certificates[0]), "X={D} Y={F} Z={} W={E}");
    caps.max_total_size = 2;
    EXPECT_FALSE(esep_search(graph("hlp-17"), caps).has_value());
    EXPECT_EQ(esep_search_detailed(graph("hlp-17")).certificates.size(), 4u);
}

// Every certificate is valid, and none is returned for a tuple where some
// (X _||_ Y | Z S) with S within W is already implied.
TEST(ESearch, CertificatesRespectTheirPremises)
{
    for (const auto& name : small_entries()) {
        const Gdag& g = catalog::get(name).graph;
        for (const auto& c : esep_search_detailed(g).certificates) {
            EXPECT_TRUE(certificate_valid(g, c)) << name << " " << format_certificate(c);
            EXPECT_TRUE(e_separated(g, c.x, c.y, c.z, c.w));
            const Mask w = g.mask(c.w);
            for_each_subset(w, [&](Mask s) {
                EXPECT_FALSE(d_separated(g, c.x, c.y, set_union(c.z, g.set(s))))
                    << name << " " << format_certificate(c);
            });
            for (const auto& wn : c.w)
                for (const auto& zn : c.z)
                    EXPECT_FALSE(descendants(g, {wn}).count(zn)) << name << " " << format_certificate(c);
        }
    }
}

TEST(EWitness, Graph17WitnessIsValid)
{
    const Gdag& g = graph("hlp-17");
    const EsepCertificate c = *esep_search(g);
    const Witness w = esep_witness(g, c);
    EXPECT_TRUE(ci_consistent(w.distribution, g).consistent);
    EXPECT_TRUE(violates_esep_constraint(w.distribution, c));
    EXPECT_GT(w.lhs, w.rhs + inequality_tolerance);
    const Witness w3 = esep_witness(g, c, 3);
    EXPECT_TRUE(ci_consistent(w3.distribution, g).consistent);
}

TEST(EWitness, RejectsCertificatesWithoutAWitness)
{
    const Gdag& g = graph("hlp-20");
    const auto r = esep_search_detailed(g);
    ASSERT_FALSE(r.certificates.empty());
    for (const auto& c : r.certificates)
        EXPECT_ERROR_CODE(esep_witness(g, c), ErrorCode::InvalidCertificate);
}

TEST(EWitness, ConstraintNeedsWAsAFunctionOfZ)
{
    const EsepCertificate c{{"D"}, {"F"}, {"C"}, {"E"}};
    // D = F with E an independent coin: not a function of C
    const auto p = DiscreteDistribution::from_rows(
        {{"C", 2}, {"D", 2}, {"E", 2}, {"F", 2}},
        {{{0, 0, 0, 0}, Rational(1, 4)}, {{0, 1, 0, 1}, Rational(1, 4)}, {{0, 0, 1, 0}, Rational(1, 4)},
         {{0, 1, 1, 1}, Rational(1, 4)}});
    EXPECT_FALSE(violates_esep_constraint(p, c));
    const auto q = DiscreteDistribution::from_rows(
        {{"C", 2}, {"D", 2}, {"E", 2}, {"F", 2}}, {{{0, 0, 0, 0}, Rational(1, 2)}, {{0, 1, 0, 1}, Rational(1, 2)}});
    EXPECT_TRUE(violates_esep_constraint(q, c));
}

// Intervening on W in a classical model of hlp-17 cuts its incoming arrows,
// after which (D _||_ F | C) holds and the non-descendants of W keep their
// distribution.
TEST(EWitness, ClassicalInterventionsOnWSatisfyTheRelation)
{
    const Gdag& g = graph("hlp-17");
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        const CausalModel m = random_model(g, 2, seed, 16);
        const auto p = observed_marginal(m);
        for (std::size_t w = 0; w < 2; ++w) {
            std::vector<Cpt> tables = m.tables();
            Cpt& e = tables[g.index("E")];
            for (auto& row : e.rows) {
                row.assign(e.cardinality, Rational(0));
                row[w] = 1;
            }
            const auto q = observed_marginal(CausalModel(g, tables));
            EXPECT_TRUE(ci_holds_in_distribution(q, parse_ci("D _||_ F | C")));
            EXPECT_EQ(marginalize(q, {"C", "D"}), marginalize(p, {"C", "D"}));
            EXPECT_EQ(event_probability(q, {{"E", w}}), 1);
        }
    }
}

TEST(Viability, TriangleAndSizeLimits)
{
    const Gdag& g = graph("triangle");
    const auto r = skeleton_viability(skeleton(g), observed_ci_relations(g));
    EXPECT_TRUE(r.viable);
    ASSERT_TRUE(r.witness.has_value());
    EXPECT_EQ(observed_ci_relations(*r.witness), observed_ci_relations(g));
    EXPECT_EQ(skeleton(*r.witness), skeleton(g));

    Skeleton big(NodeSet{"A", "B", "C", "D", "E", "F"});
    EXPECT_ERROR_CODE(skeleton_viability(big, CiSet(big.nodes(), {})), ErrorCode::TooLarge);
    EXPECT_ERROR_CODE(skeleton_viability(skeleton(g), observed_ci_relations(graph("bell"))), ErrorCode::NodeMismatch);
}

TEST(Viability, MissingEdgeForcesIndependence)
{
    // two non-adjacent nodes are always independent
    const Skeleton sk(NodeSet{"A", "B"});
    const auto r = skeleton_viability(sk, CiSet(sk.nodes(), {}), true);
    EXPECT_FALSE(r.viable);
    ASSERT_TRUE(r.conflict.has_value());
    EXPECT_EQ(format_ci(*r.conflict), "A _||_ B");
    EXPECT_FALSE(r.conflict_in_target);
    EXPECT_TRUE(skeleton_viability(sk, CiSet(sk.nodes(), {parse_ci("A _||_ B")})).viable);
}

TEST(Viability, AppendixChordAnalysis)
{
    const Gdag& g = graph("appendix-8");
    const auto deleted = chord_deletion_report(g);
    ASSERT_EQ(deleted.size(), 6u);
    for (const auto& c : deleted) {
        EXPECT_FALSE(c.viable_when_deleted) << c.chord.first << "-" << c.chord.second;
        // without X - Z every candidate separates X from Z, which g does not
        if (c.chord == Edge{"X", "Z"}) {
            ASSERT_TRUE(c.conflict.has_value());
            EXPECT_EQ(format_ci(*c.conflict), "X _||_ Z");
            EXPECT_FALSE(c.conflict_in_target);
        }
    }
    const auto added = chord_addition_report(g);
    ASSERT_EQ(added.size(), 4u);
    for (const auto& n : added)
        EXPECT_TRUE(n.blocking.has_value()) << n.pair.first << "-" << n.pair.second;
    EXPECT_TRUE(skeleton_viability(skeleton(g), observed_ci_relations(g)).viable);
}

TEST(Classify, CatalogVerdicts)
{
    const std::vector<std::pair<const char*, Method>> interesting{{"hlp-15", Method::FineGrainedInequality},
                                                                  {"hlp-16", Method::FineGrainedInequality},
                                                                  {"hlp-20", Method::FineGrainedInequality},
                                                                  {"hlp-17", Method::ESeparation},
                                                                  {"hlp-21", Method::SkeletonMethod}};
    for (const auto& [name, method] : interesting) {
        const Verdict v = classify(graph(name));
        EXPECT_EQ(v.status, Status::Interesting) << name;
        EXPECT_EQ(v.method, method) << name;
    }
    for (const char* name : {"bell", "triangle"}) {
        const Verdict v = classify(graph(name));
        EXPECT_EQ(v.status, Status::Inconclusive) << name;
        EXPECT_EQ(v.method, Method::None) << name;
        EXPECT_FALSE(v.witness.has_value());
    }
    EXPECT_EQ(classify(graph("hlp-17")).summary(), "Interesting (e-separation: X={D} Y={F} Z={C} W={E})");
}

TEST(Classify, NegativeControlTraces)
{
    const Verdict t = classify(graph("triangle"));
    EXPECT_EQ(t.trace, (std::vector<std::string>{"skeleton method: equal skeletons",
                                                 "e-separation: no deletion-induced CI relation",
                                                 "fine-grained: no registered witness"}));
    const Verdict b = classify(graph("bell"));
    EXPECT_EQ(b.trace.front(), "skeleton method: no comparator (observed CI relations are non-empty)");
    EXPECT_EQ(b.trace[1], "e-separation: no deletion-induced CI relation");
}

TEST(Classify, FineGrainedTraceNamesTheConflict)
{
    ClassifyOptions options;
    options.fine_grained = std::vector<FineGrainedRegistration>{
        {"hlp-20", graph("hlp-20"), tilde_p(), eq1_inequality()}};
    const Verdict v = classify(graph("hlp-20"), options);
    EXPECT_EQ(v.status, Status::Inconclusive);
    EXPECT_NE(std::find(v.trace.begin(), v.trace.end(), "fine-grained: hlp-20 witness violates A _||_ F | E"),
              v.trace.end());
}

// Every witness attached to a verdict is CI-consistent with the graph and
// violates the constraint it names.
TEST(Classify, WitnessesAreValidAndVerdictsDeterministic)
{
    for (const auto& name : small_entries()) {
        const Gdag& g = catalog::get(name).graph;
        const Verdict v = classify(g);
        EXPECT_EQ(verdict_to_json(v).dump(), verdict_to_json(classify(g)).dump()) << name;
        if (!v.witness)
            continue;
        EXPECT_TRUE(ci_consistent(v.witness->distribution, g).consistent) << name;
        EXPECT_GT(v.witness->lhs, v.witness->rhs + inequality_tolerance) << name;
        if (v.method == Method::ESeparation) {
            EXPECT_TRUE(violates_esep_constraint(v.witness->distribution, *v.certificate)) << name;
        }
    }
}

TEST(Classify, UserComparator)
{
    ClassifyOptions options;
    options.comparator = make_graph({"A", "B", "C", "D"}, {}, {{"A", "B"}, {"B", "C"}, {"C", "D"}});
    const Verdict v = classify(graph("hlp-21"), options);
    EXPECT_EQ(v.trace.front(), "skeleton method: observed CI relations differ from the comparator's");
    options.comparator = make_graph({"X"}, {}, {});
    EXPECT_ERROR_CODE(classify(graph("hlp-21"), options), ErrorCode::NodeMismatch);
}
