#include <functional>
#include <random>

#include <gtest/gtest.h>

#include "causalgap/catalog.hpp"
#include "causalgap/io.hpp"
#include "causalgap/model.hpp"
#include "causalgap/report.hpp"

#include "helpers.hpp"

using namespace causalgap;

namespace {

// Expects a parse failure with the given code whose message cites `line`.
void expect_line_error(const std::function<void()>& parse, ErrorCode code, std::size_t line)
{
    try {
        parse();
        ADD_FAILURE() << "no error";
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), code) << e.what();
        EXPECT_EQ(e.message().rfind("line " + std::to_string(line) + ":", 0), 0u) << e.what();
    }
}

} // namespace

TEST(GraphFiles, TextAndJsonRoundTrip)
{
    for (const auto& e : catalog::entries()) {
        const Gdag& g = e.graph;
        const Gdag text = io::parse_graph(io::format_graph(g));
        EXPECT_EQ(text.nodes(), g.nodes()) << e.name;
        EXPECT_EQ(text.edges(), g.edges()) << e.name;
        const Gdag json = io::parse_graph(io::graph_to_json(g).dump(2));
        EXPECT_EQ(json.nodes(), g.nodes()) << e.name;
        EXPECT_EQ(json.edges(), g.edges()) << e.name;
    }
}

TEST(GraphFiles, CommentsAndBlankLines)
{
    const Gdag g = io::parse_graph("# a chain\n\nnode A observed\nnode U latent  # hidden\nedge U A\n");
    EXPECT_EQ(g.size(), 2u);
    EXPECT_TRUE(g.has_edge("U", "A"));
    EXPECT_FALSE(g.is_observed("U"));
}

TEST(GraphFiles, ErrorsCiteLines)
{
    expect_line_error([] { io::parse_graph("node A observed\nnode A latent\n"); }, ErrorCode::DuplicateLabel, 2);
    expect_line_error([] { io::parse_graph("node A observed\n\nedge A B\n"); }, ErrorCode::DanglingEdge, 3);
    expect_line_error([] { io::parse_graph("node A visible\n"); }, ErrorCode::ParseError, 1);
    expect_line_error([] { io::parse_graph("node A observed\nvertex B\n"); }, ErrorCode::ParseError, 2);
    EXPECT_ERROR_CODE(io::parse_graph("node A observed\nnode B observed\nedge A B\nedge B A\n"),
                      ErrorCode::CycleDetected);
    EXPECT_ERROR_CODE(io::parse_graph("{\"nodes\": [}"), ErrorCode::ParseError);
    EXPECT_ERROR_CODE(io::parse_graph("{\"nodes\": [{\"label\": \"A\"}], \"edges\": []}"), ErrorCode::ParseError);
}

TEST(DistributionFiles, RoundTrip)
{
    for (const auto& p : {tilde_p(), tilde_p_prime()})
        EXPECT_EQ(io::parse_distribution(io::format_distribution(p)), p);
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto p = observed_marginal(random_model(catalog::get("bell").graph, 3, seed, 64));
        EXPECT_EQ(io::parse_distribution(io::format_distribution(p)), p);
    }
}

TEST(DistributionFiles, Errors)
{
    expect_line_error([] { io::parse_distribution("var A 2\np 0 1/2\np 2 1/2\n"); }, ErrorCode::ParseError, 3);
    expect_line_error([] { io::parse_distribution("var A 2\np 0 1/2\np 0 1/2\n"); }, ErrorCode::ParseError, 3);
    expect_line_error([] { io::parse_distribution("var A 2\np 0 -1/2\n"); }, ErrorCode::InvalidTable, 2);
    expect_line_error([] { io::parse_distribution("var A two\n"); }, ErrorCode::ParseError, 1);
    expect_line_error([] { io::parse_distribution("var A 2\np 0 half\n"); }, ErrorCode::ParseError, 2);
    expect_line_error([] { io::parse_distribution("var A 2\nvar A 2\n"); }, ErrorCode::DuplicateLabel, 2);
    EXPECT_ERROR_CODE(io::parse_distribution("var A 2\np 0 1/2\n"), ErrorCode::NotNormalized);
}

TEST(ModelFiles, RoundTrip)
{
    for (const char* name : {"bell", "hlp-16", "triangle"}) {
        const CausalModel m = random_model(catalog::get(name).graph, 2, 3, 16);
        const CausalModel back = io::parse_model(io::format_model(m));
        EXPECT_EQ(simulate_model(back), simulate_model(m)) << name;
        EXPECT_EQ(io::format_model(back), io::format_model(m)) << name;
    }
}

TEST(ModelFiles, Errors)
{
    const std::string head = "node A observed\nnode B observed\nedge A B\ncpt A | - : 1/2 1/2\n";
    expect_line_error([&] { io::parse_model(head + "cpt B | 0 : 1 0\ncpt B | 2 : 1 0\n"); }, ErrorCode::InvalidTable,
                      6);
    expect_line_error([&] { io::parse_model(head + "cpt B | 0 : 1 0\ncpt B | 0 : 1 0\n"); }, ErrorCode::InvalidTable,
                      6);
    expect_line_error([&] { io::parse_model(head + "cpt B | 0 : 1 0\ncpt B | 1 : 1/3 1/3 1/3\n"); },
                      ErrorCode::InvalidTable, 6);
    expect_line_error([&] { io::parse_model(head + "cpt C | - : 1\n"); }, ErrorCode::UnknownNode, 5);
    expect_line_error([&] { io::parse_model(head + "cpt B 0 : 1 0\n"); }, ErrorCode::ParseError, 5);
    EXPECT_ERROR_CODE(io::parse_model(head + "cpt B | 0 : 1 0\n"), ErrorCode::InvalidTable);
    EXPECT_ERROR_CODE(io::parse_model(head + "cpt B | 0 : 1 0\ncpt B | 1 : 1/2 1/3\n"), ErrorCode::InvalidTable);
}

TEST(InequalityFiles, RoundTripAndEvaluation)
{
    const auto q = eq1_inequality();
    const auto parsed = io::parse_inequalities(io::format_inequality(q) + "\n" + io::format_inequality(q));
    ASSERT_EQ(parsed.size(), 2u);
    EXPECT_EQ(io::format_inequality(parsed[0]), io::format_inequality(q));
    const auto e = evaluate(parsed[1], tilde_p());
    EXPECT_NEAR(e.lhs, 2.0, inequality_tolerance);
}

TEST(InequalityFiles, Errors)
{
    expect_line_error([] { io::parse_inequalities("inequality q\nexogenous A\n"); }, ErrorCode::ParseError, 1);
    expect_line_error([] { io::parse_inequalities("term + A B - 0\n"); }, ErrorCode::ParseError, 1);
    expect_line_error(
        [] { io::parse_inequalities("inequality q\nexogenous A\nsections 0\nterm * E D - 0\nrhs D\nend\n"); },
        ErrorCode::ParseError, 4);
    expect_line_error(
        [] { io::parse_inequalities("inequality q\nexogenous A\nsections 0\nterm + E D - 1\nrhs D\nend\n"); },
        ErrorCode::ParseError, 6);
}

TEST(CiFiles, RoundTripWithNegations)
{
    const std::string text = "A _||_ B\n! X _||_ Y | A,B\nA,B _||_ C | D\n";
    const auto lines = io::parse_ci_lines("# relations\n" + text);
    ASSERT_EQ(lines.size(), 3u);
    EXPECT_TRUE(lines[0].holds);
    EXPECT_FALSE(lines[1].holds);
    EXPECT_EQ(io::format_ci_lines(lines), text);
    expect_line_error([] { io::parse_ci_lines("A _||_ B\n\nA _||_ A\n"); }, ErrorCode::OverlappingSets, 3);
}

TEST(CiFiles, CatalogExportsParse)
{
    for (const auto& e : catalog::entries()) {
        const auto lines = io::parse_ci_lines(catalog::export_properties(e));
        for (const auto& l : lines)
            EXPECT_EQ(d_separated(e.graph, l.relation.x, l.relation.y, l.relation.z), l.holds)
                << e.name << ": " << format_ci(l.relation);
    }
}

TEST(Reports, VerdictJsonShape)
{
    const Verdict v = classify(catalog::get("hlp-17").graph);
    const auto j = verdict_to_json(v);
    EXPECT_EQ(j["status"], "Interesting");
    EXPECT_EQ(j["method"], "ESeparation");
    EXPECT_EQ(j["certificate"]["w"], nlohmann::json::array({"E"}));
    EXPECT_EQ(j["witness"]["violated_constraint"], "e-separation constraint");
    EXPECT_TRUE(j["trace"].is_array());
    const auto t = verdict_to_json(classify(catalog::get("triangle").graph));
    EXPECT_TRUE(t["certificate"].is_null());
    EXPECT_TRUE(t["witness"].is_null());
    EXPECT_EQ(format_verdict(v).substr(0, v.summary().size() + 1), v.summary() + "\n");
}
