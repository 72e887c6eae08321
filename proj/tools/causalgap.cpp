// causalgap: command-line front end to the library.
//
// Exit codes: 0 when the query was answered (whatever the answer), 1 for
// usage errors, 2 when an input file or argument is invalid.

#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "causalgap/catalog.hpp"
#include "causalgap/ci.hpp"
#include "causalgap/entropy.hpp"
#include "causalgap/fine_grained.hpp"
#include "causalgap/interestingness.hpp"
#include "causalgap/io.hpp"
#include "causalgap/model.hpp"
#include "causalgap/report.hpp"

#include "criteria.hpp"

using namespace causalgap;

namespace {

const std::string catalog_scheme = "@catalog:";

bool is_catalog(const std::string& ref) { return ref.rfind(catalog_scheme, 0) == 0; }

Gdag load_graph(const std::string& ref)
{
    if (is_catalog(ref))
        return catalog::get(ref.substr(catalog_scheme.size())).graph;
    return io::parse_graph(io::read_file(ref));
}

// Built-in distributions: the two eq1 witnesses, or the fine-grained witness
// attached to a catalog entry.
DiscreteDistribution load_distribution(const std::string& ref)
{
    if (!is_catalog(ref))
        return io::parse_distribution(io::read_file(ref));
    const std::string name = ref.substr(catalog_scheme.size());
    if (name == "tilde_p")
        return tilde_p();
    if (name == "tilde_p_prime")
        return tilde_p_prime();
    const auto& entry = catalog::get(name);
    if (!entry.fine_grained_witness)
        throw Error(ErrorCode::UnknownEntry, "catalog entry '" + name + "' has no witness distribution");
    return *entry.fine_grained_witness;
}

std::string bool_text(bool b) { return b ? "true" : "false"; }

struct SetFlags {
    std::string x, y, z = "-", w = "-";
};

void add_set_flags(CLI::App* cmd, SetFlags& f, bool with_w)
{
    cmd->add_option("--x", f.x, "first set (comma-separated labels)")->required();
    cmd->add_option("--y", f.y, "second set")->required();
    cmd->add_option("--z", f.z, "conditioning set, '-' for empty")->capture_default_str();
    if (with_w)
        cmd->add_option("--w", f.w, "deleted set, '-' for empty")->required();
}

std::string format_skeleton(const Skeleton& sk)
{
    std::string out = "nodes " + join_set(sk.nodes()) + "\n";
    for (const auto& [a, b] : sk.edges())
        out += a + " - " + b + "\n";
    return out;
}

// Each entry is either a set S, giving H(S), or a CI relation, giving the
// conditional mutual information of its two sides given its condition.
std::string entropy_report(const DiscreteDistribution& p, const std::string& sets)
{
    std::string out;
    std::stringstream ss(sets);
    std::string item;
    while (std::getline(ss, item, ';')) {
        if (item.find_first_not_of(" \t") == std::string::npos)
            continue;
        if (item.find("_||_") != std::string::npos) {
            const CiRelation r = parse_ci(item);
            out += "I(" + join_set(r.x) + " : " + join_set(r.y) + " | " + join_set(r.z) +
                   ") = " + format_real(conditional_mutual_information(p, r.x, r.y, r.z)) + "\n";
        } else {
            const NodeSet s = parse_set(item);
            require_variables(p, s);
            out += "H(" + join_set(s) + ") = " + format_real(shannon_entropy(p, s)) + "\n";
        }
    }
    return out;
}

std::string inequality_line(const InequalityEvaluation& e)
{
    return "lhs=" + format_real(e.lhs) + " rhs=" + format_real(e.rhs) + (e.violated() ? " VIOLATED" : " satisfied");
}

// Draws `samples` joint outcomes and returns the empirical distribution as
// exact counts over the sample size.
DiscreteDistribution empirical(const DiscreteDistribution& p, std::size_t samples, std::uint64_t seed)
{
    std::vector<double> weights;
    for (const auto& m : p.masses())
        weights.push_back(to_double(m));
    std::mt19937_64 rng(seed);
    std::discrete_distribution<std::size_t> draw(weights.begin(), weights.end());
    std::vector<std::size_t> counts(weights.size(), 0);
    for (std::size_t i = 0; i < samples; ++i)
        ++counts[draw(rng)];
    std::vector<std::pair<Assignment, Rational>> rows;
    for (std::size_t off = 0; off < counts.size(); ++off)
        if (counts[off] != 0)
            rows.emplace_back(p.assignment(off), Rational(counts[off], samples));
    return DiscreteDistribution::from_rows(p.variables(), rows);
}

std::string simulate_report(const CausalModel& m, std::size_t samples, std::uint64_t seed)
{
    const Gdag& g = m.graph();
    const DiscreteDistribution obs = observed_marginal(m);
    std::string out = "observed marginal:\n" + io::format_distribution(obs);
    const auto violations = check_polymatroid(entropy_vector(obs));
    out += "polymatroid: " + std::string(violations.empty() ? "ok" : std::to_string(violations.size()) + " violations") + "\n";
    for (const auto& v : violations)
        out += "  " + v.kind + ": " + v.inequality + "\n";
    const CiSet relations = observed_ci_relations(g, max_nodes);
    std::size_t held = 0;
    for (const auto& r : relations)
        held += ci_holds_in_distribution(obs, r);
    out += "graph CI relations holding exactly: " + std::to_string(held) + "/" + std::to_string(relations.size()) + "\n";
    for (const auto& r : relations)
        if (!ci_holds_in_distribution(obs, r))
            out += "  fails: " + format_ci(r) + "\n";
    if (samples > 0) {
        const DiscreteDistribution emp = empirical(obs, samples, seed);
        double worst = 0;
        obs.for_each([&](const Assignment& a, const Rational& q) {
            worst = std::max(worst, std::abs(to_double(q) - to_double(emp.prob(a))));
        });
        out += "empirical marginal (" + std::to_string(samples) + " samples, seed " + std::to_string(seed) + "):\n" +
               io::format_distribution(emp) + "max |empirical - exact| = " + format_real(worst) + "\n";
    }
    return out;
}

std::string reproduce_report()
{
    std::string out;
    std::size_t passed = 0, total = 0;
    for (const auto& check : acceptance::all()) {
        const auto r = check();
        ++total;
        passed += r.passed;
        out += acceptance::format_result(r);
    }
    return out + std::to_string(passed) + "/" + std::to_string(total) + " criteria passed\n";
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Classify causal graphs with latent nodes and evaluate entropic inequalities."};
    app.require_subcommand(1);

    std::string graph_ref, dist_ref, model_ref, comparator_ref, sets, inequality, out_path;
    SetFlags flags;
    bool canonical = false, json = false;
    std::optional<std::size_t> max_set_size;
    std::uint64_t seed = 1;
    std::size_t samples = 0;

    auto* dsep = app.add_subcommand("dsep", "d-separation query");
    dsep->add_option("graph", graph_ref, "graph file or @catalog:name")->required();
    add_set_flags(dsep, flags, false);

    auto* esep = app.add_subcommand("esep", "e-separation query");
    esep->add_option("graph", graph_ref, "graph file or @catalog:name")->required();
    add_set_flags(esep, flags, true);

    auto* skel = app.add_subcommand("skeleton", "print the skeleton or the canonical projection");
    skel->add_option("graph", graph_ref, "graph file or @catalog:name")->required();
    skel->add_flag("--canonical", canonical, "print the canonical projection instead");

    auto* ci = app.add_subcommand("ci", "list the observed CI relations implied by the graph");
    ci->add_option("graph", graph_ref, "graph file or @catalog:name")->required();
    ci->add_option("--max-set-size", max_set_size, "largest set size to enumerate");

    auto* cls = app.add_subcommand("classify", "run the interestingness pipeline");
    cls->add_option("graph", graph_ref, "graph file or @catalog:name")->required();
    cls->add_option("--comparator", comparator_ref, "comparator graph for the skeleton method");
    cls->add_option("--max-set-size", max_set_size, "largest set size for CI enumeration");
    cls->add_flag("--json", json, "print the verdict as JSON");

    auto* ent = app.add_subcommand("entropy", "entropies and conditional mutual informations");
    ent->add_option("dist", dist_ref, "distribution file or @catalog:name")->required();
    ent->add_option("--sets", sets, "';'-separated sets or CI relations")->required();

    auto* ineq = app.add_subcommand("check-ineq", "evaluate a fine-grained inequality");
    ineq->add_option("dist", dist_ref, "distribution file or @catalog:name")->required();
    ineq->add_option("--inequality", inequality, "'eq1' or an inequality file")->required();

    auto* sim = app.add_subcommand("simulate", "exact marginal of a causal model with a CI report");
    sim->add_option("model", model_ref, "model file")->required();
    sim->add_option("--seed", seed, "sampling seed")->capture_default_str();
    sim->add_option("--samples", samples, "number of samples to draw (0 for none)")->capture_default_str();

    auto* repro = app.add_subcommand("reproduce-paper", "run the acceptance checks and print the comparison table");
    repro->add_option("--out", out_path, "also write the table to this file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        if (dsep->parsed() || esep->parsed()) {
            const Gdag g = load_graph(graph_ref);
            const NodeSet x = parse_set(flags.x), y = parse_set(flags.y), z = parse_set(flags.z);
            const bool answer = dsep->parsed() ? d_separated(g, x, y, z) : e_separated(g, x, y, z, parse_set(flags.w));
            std::cout << bool_text(answer) << "\n";
        } else if (skel->parsed()) {
            const Gdag g = load_graph(graph_ref);
            std::cout << (canonical ? io::format_graph(canonical_projection(g)) : format_skeleton(skeleton(g)));
        } else if (ci->parsed()) {
            std::cout << io::format_ci_set(observed_ci_relations(load_graph(graph_ref), max_set_size));
        } else if (cls->parsed()) {
            ClassifyOptions options;
            options.max_set_size = max_set_size;
            if (!comparator_ref.empty())
                options.comparator = load_graph(comparator_ref);
            const Verdict v = classify(load_graph(graph_ref), options);
            std::cout << (json ? verdict_to_json(v).dump(2) + "\n" : format_verdict(v));
        } else if (ent->parsed()) {
            std::cout << entropy_report(load_distribution(dist_ref), sets);
        } else if (ineq->parsed()) {
            const DiscreteDistribution p = load_distribution(dist_ref);
            if (inequality == "eq1") {
                std::cout << inequality_line(fine_grained_lhs_eq1(p)) << "\n";
            } else {
                const auto list = io::parse_inequalities(io::read_file(inequality));
                for (const auto& q : list)
                    std::cout << (list.size() > 1 ? q.name + ": " : "") << inequality_line(evaluate(q, p)) << "\n";
            }
        } else if (sim->parsed()) {
            std::cout << simulate_report(io::parse_model(io::read_file(model_ref)), samples, seed);
        } else if (repro->parsed()) {
            const std::string report = reproduce_report();
            std::cout << report;
            if (!out_path.empty())
                io::write_file(out_path, report);
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
