#include <gtest/gtest.h>

#include "causalgap/catalog.hpp"
#include "causalgap/fine_grained.hpp"
#include "causalgap/model.hpp"

#include "helpers.hpp"
#include "oracles.hpp"

using namespace causalgap;

namespace {

// I(X:Y) on the A = a section, from the independent entropy oracle.
double section_mi(const DiscreteDistribution& p, std::size_t a, const std::string& x, const std::string& y)
{
    const auto s = condition(p, {{"A", a}});
    return oracle::entropy(s, {x}) + oracle::entropy(s, {y}) - oracle::entropy(s, {x, y});
}

double eq1_by_hand(const DiscreteDistribution& p)
{
    return section_mi(p, 0, "E", "D") - section_mi(p, 0, "F", "D") + section_mi(p, 1, "F", "D") -
           section_mi(p, 1, "E", "D");
}

} // namespace

TEST(Eq1, WitnessesViolateIt)
{
    for (const auto& p : {tilde_p(), tilde_p_prime()}) {
        const auto e = fine_grained_lhs_eq1(p);
        EXPECT_NEAR(e.lhs, 2.0, inequality_tolerance);
        EXPECT_NEAR(e.rhs, 1.0, inequality_tolerance);
        EXPECT_TRUE(e.violated());
        EXPECT_NEAR(e.lhs, eq1_by_hand(p), identity_tolerance);
    }
}

TEST(Eq1, SectionsAreInterventions)
{
    const auto s = section_distribution(tilde_p(), "A", 1);
    ASSERT_EQ(s.interventions().size(), 1u);
    EXPECT_EQ(s.interventions()[0].first, "A");
    // with the graph, exogeneity of A is checked
    const Gdag& g20 = catalog::get("hlp-20").graph;
    EXPECT_NO_THROW(section_distribution(tilde_p_prime(), "A", 0, &g20));
    const Gdag& g17 = catalog::get("hlp-17").graph;
    const auto p17 = observed_marginal(random_model(g17, 2, 1, 8));
    EXPECT_ERROR_CODE(section_distribution(p17, "E", 0, &g17), ErrorCode::NotExogenous);
}

TEST(Eq1, Errors)
{
    const auto p = marginalize(tilde_p(), {"A", "D", "E"});
    EXPECT_ERROR_CODE(fine_grained_lhs_eq1(p), ErrorCode::MissingVariable);
    // A never takes the value 1
    const auto q = DiscreteDistribution::from_rows({{"A", 2}, {"D", 2}, {"E", 2}, {"F", 2}},
                                                   {{{0, 0, 0, 0}, Rational(1, 2)}, {{0, 1, 1, 1}, Rational(1, 2)}});
    EXPECT_ERROR_CODE(fine_grained_lhs_eq1(q), ErrorCode::ZeroProbabilityEvent);
}

TEST(Eq1, InequalityDescription)
{
    const auto q = eq1_inequality();
    EXPECT_EQ(q.exogenous, "A");
    EXPECT_EQ(q.terms.size(), 4u);
    EXPECT_EQ(q.variables(), (NodeSet{"A", "D", "E", "F"}));
    EXPECT_EQ(q.rhs, (NodeSet{"D"}));
}

// On classical models the inequality holds. Where the graph carries the
// four latent relations the bounds used to derive it hold too, and the
// left-hand side decomposes into the Q and R terms exactly.
TEST(Eq1, HoldsOnClassicalModels)
{
    for (const char* name : {"hlp-15", "hlp-16", "hlp-20"}) {
        const Gdag& g = catalog::get(name).graph;
        const bool relations = d_separated(g, {"D"}, {"E"}, {"C", "A"}) && d_separated(g, {"D"}, {"F"}, {"B", "A"}) &&
                               d_separated(g, {"B", "C", "D"}, {"A"}, {}) && d_separated(g, {"B"}, {"C"}, {});
        EXPECT_EQ(relations, std::string(name) != "hlp-20");
        std::size_t evaluated = 0;
        for (std::uint64_t seed = 0; evaluated < 150; ++seed) {
            std::vector<std::size_t> cards(g.size(), 2);
            cards[g.index("E")] = 2 + seed % 2;
            const auto full = simulate_model(random_model(g, cards, seed, 32));
            const auto obs = marginalize(full, g.observed_nodes());
            if (event_probability(obs, {{"A", 0}}) == 0 || event_probability(obs, {{"A", 1}}) == 0)
                continue;
            ++evaluated;
            const auto e = fine_grained_lhs_eq1(obs, &g);
            EXPECT_FALSE(e.violated()) << name << " seed " << seed;
            const auto b = eq1_bounds(full);
            EXPECT_NEAR(e.lhs, b.q0 - b.r0 + b.r1 - b.q1, identity_tolerance);
            if (!relations)
                continue;
            EXPECT_LE(b.q0, b.q0_bound + inequality_tolerance) << name;
            EXPECT_LE(b.r1, b.r1_bound + inequality_tolerance) << name;
            EXPECT_LE(-b.r0, b.h_d + inequality_tolerance) << name;
            EXPECT_LE(-b.q1, b.h_d + inequality_tolerance) << name;
            EXPECT_LE(e.lhs, b.lhs_bound + inequality_tolerance) << name;
        }
    }
}

TEST(Eq1, BoundsNeedLatents) { EXPECT_ERROR_CODE(eq1_bounds(tilde_p()), ErrorCode::MissingVariable); }
