#pragma once

#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "causalgap/ci.hpp"
#include "causalgap/distribution.hpp"
#include "causalgap/error.hpp"
#include "causalgap/fine_grained.hpp"
#include "causalgap/graph.hpp"
#include "causalgap/model.hpp"
#include "causalgap/rational.hpp"

namespace causalgap::io {

namespace detail {

struct Line {
    std::size_t number;
    std::vector<std::string> words;
};

/// Splits text into non-empty lines of whitespace-separated words, dropping
/// everything after '#'.
inline std::vector<Line> tokenize(const std::string& text)
{
    std::vector<Line> out;
    std::istringstream in(text);
    std::string raw;
    std::size_t n = 0;
    while (std::getline(in, raw)) {
        ++n;
        if (auto hash = raw.find('#'); hash != std::string::npos)
            raw.erase(hash);
        std::istringstream ws(raw);
        Line line{n, {}};
        for (std::string w; ws >> w;)
            line.words.push_back(w);
        if (!line.words.empty())
            out.push_back(std::move(line));
    }
    return out;
}

[[noreturn]] inline void fail(ErrorCode code, std::size_t line, const std::string& msg)
{
    throw Error(code, "line " + std::to_string(line) + ": " + msg);
}

inline std::size_t parse_count(const std::string& word, std::size_t line, const char* what)
{
    std::size_t pos = 0;
    unsigned long long v = 0;
    try {
        v = std::stoull(word, &pos);
    } catch (const std::exception&) {
        pos = 0;
    }
    if (pos != word.size() || word.empty() || word[0] == '-' || word[0] == '+')
        fail(ErrorCode::ParseError, line, std::string("expected ") + what + ", got '" + word + "'");
    return static_cast<std::size_t>(v);
}

inline Rational parse_mass(const std::string& word, std::size_t line)
{
    try {
        return parse_rational(word);
    } catch (const Error& e) {
        fail(ErrorCode::ParseError, line, e.message());
    }
}

inline bool is_json(const std::string& text)
{
    const auto first = text.find_first_not_of(" \t\r\n");
    return first != std::string::npos && text[first] == '{';
}

/// Consumes graph directives; returns true if the line was one.
inline bool graph_directive(const Line& l, GraphSpec& spec, std::map<std::string, std::size_t>& declared)
{
    const auto& w = l.words;
    if (w[0] == "node") {
        if (w.size() != 3 || (w[2] != "observed" && w[2] != "latent"))
            fail(ErrorCode::ParseError, l.number, "expected 'node <label> observed|latent'");
        if (!declared.emplace(w[1], l.number).second)
            fail(ErrorCode::DuplicateLabel, l.number, "node '" + w[1] + "' already declared on line " +
                                                          std::to_string(declared[w[1]]));
        spec.nodes.push_back({w[1], w[2] == "observed"});
        return true;
    }
    if (w[0] == "edge") {
        if (w.size() != 3)
            fail(ErrorCode::ParseError, l.number, "expected 'edge <tail> <head>'");
        spec.edges.emplace_back(w[1], w[2]);
        return true;
    }
    return false;
}

inline Gdag finish_graph(const GraphSpec& spec, const std::vector<std::size_t>& edge_lines)
{
    std::map<std::string, bool> known;
    for (const auto& n : spec.nodes)
        known[n.label] = true;
    for (std::size_t k = 0; k < spec.edges.size(); ++k) {
        const auto& [t, h] = spec.edges[k];
        for (const auto* end : {&t, &h})
            if (!known.count(*end))
                fail(ErrorCode::DanglingEdge, edge_lines[k], "edge mentions undeclared node '" + *end + "'");
    }
    return Gdag(spec);
}

} // namespace detail

// ---------------------------------------------------------------------------
// Graphs

inline Gdag graph_from_json(const nlohmann::json& j)
{
    GraphSpec spec;
    try {
        for (const auto& n : j.at("nodes"))
            spec.nodes.push_back({n.at("label").get<std::string>(), n.at("observed").get<bool>()});
        for (const auto& e : j.at("edges"))
            spec.edges.emplace_back(e.at(0).get<std::string>(), e.at(1).get<std::string>());
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::ParseError, std::string("graph JSON: ") + e.what());
    }
    return Gdag(spec);
}

inline nlohmann::json graph_to_json(const Gdag& g)
{
    nlohmann::json j;
    j["nodes"] = nlohmann::json::array();
    for (const auto& n : g.nodes())
        j["nodes"].push_back({{"label", n.label}, {"observed", n.observed}});
    j["edges"] = nlohmann::json::array();
    for (const auto& [t, h] : g.edges())
        j["edges"].push_back({t, h});
    return j;
}

/// Text directives or, if the text starts with '{', the JSON object form.
inline Gdag parse_graph(const std::string& text)
{
    if (detail::is_json(text)) {
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(text);
        } catch (const nlohmann::json::parse_error& e) {
            throw Error(ErrorCode::ParseError, std::string("graph JSON: ") + e.what());
        }
        return graph_from_json(j);
    }
    GraphSpec spec;
    std::map<std::string, std::size_t> declared;
    std::vector<std::size_t> edge_lines;
    for (const auto& l : detail::tokenize(text)) {
        if (!detail::graph_directive(l, spec, declared))
            detail::fail(ErrorCode::ParseError, l.number, "unknown directive '" + l.words[0] + "'");
        if (l.words[0] == "edge")
            edge_lines.push_back(l.number);
    }
    return detail::finish_graph(spec, edge_lines);
}

inline std::string format_graph(const Gdag& g)
{
    std::string out;
    for (const auto& n : g.nodes())
        out += "node " + n.label + (n.observed ? " observed\n" : " latent\n");
    for (const auto& [t, h] : g.edges())
        out += "edge " + t + " " + h + "\n";
    return out;
}

// ---------------------------------------------------------------------------
// Distributions

inline DiscreteDistribution parse_distribution(const std::string& text)
{
    std::vector<Variable> vars;
    std::vector<std::pair<Assignment, Rational>> rows;
    std::map<Assignment, std::size_t> seen;
    for (const auto& l : detail::tokenize(text)) {
        const auto& w = l.words;
        if (w[0] == "var") {
            if (!rows.empty())
                detail::fail(ErrorCode::ParseError, l.number, "'var' after the first 'p' row");
            if (w.size() != 3)
                detail::fail(ErrorCode::ParseError, l.number, "expected 'var <name> <cardinality>'");
            for (const auto& v : vars)
                if (v.name == w[1])
                    detail::fail(ErrorCode::DuplicateLabel, l.number, "variable '" + w[1] + "' declared twice");
            const auto card = detail::parse_count(w[2], l.number, "a cardinality");
            if (card == 0)
                detail::fail(ErrorCode::ParseError, l.number, "cardinality must be positive");
            vars.push_back({w[1], card});
        } else if (w[0] == "p") {
            if (w.size() != vars.size() + 2)
                detail::fail(ErrorCode::ParseError, l.number, "expected " + std::to_string(vars.size()) +
                                                                  " values and a probability");
            Assignment a;
            for (std::size_t i = 0; i < vars.size(); ++i) {
                a.push_back(detail::parse_count(w[i + 1], l.number, "a value"));
                if (a.back() >= vars[i].cardinality)
                    detail::fail(ErrorCode::ParseError, l.number, "value " + w[i + 1] + " out of range for '" +
                                                                      vars[i].name + "'");
            }
            if (auto [it, fresh] = seen.emplace(a, l.number); !fresh)
                detail::fail(ErrorCode::ParseError, l.number, "row repeats line " + std::to_string(it->second));
            const Rational m = detail::parse_mass(w.back(), l.number);
            if (m < 0)
                detail::fail(ErrorCode::InvalidTable, l.number, "negative probability");
            rows.emplace_back(std::move(a), m);
        } else {
            detail::fail(ErrorCode::ParseError, l.number, "unknown directive '" + w[0] + "'");
        }
    }
    return DiscreteDistribution::from_rows(std::move(vars), rows);
}

/// Non-zero rows only, in table order.
inline std::string format_distribution(const DiscreteDistribution& p)
{
    std::string out;
    for (const auto& v : p.variables())
        out += "var " + v.name + " " + std::to_string(v.cardinality) + "\n";
    p.for_each([&](const Assignment& a, const Rational& m) {
        if (m == 0)
            return;
        out += "p";
        for (auto x : a)
            out += " " + std::to_string(x);
        out += " " + format_rational(m) + "\n";
    });
    return out;
}

// ---------------------------------------------------------------------------
// Causal models

/// Graph directives plus "cpt <node> | <parent values> : <probabilities>",
/// parent values in graph declaration order ("-" or nothing when parentless).
/// A node's cardinality is the length of its rows.
inline CausalModel parse_model(const std::string& text)
{
    GraphSpec spec;
    std::map<std::string, std::size_t> declared;
    std::vector<std::size_t> edge_lines;
    struct Row {
        std::size_t line;
        std::vector<std::size_t> parents;
        std::vector<Rational> probs;
    };
    std::map<std::string, std::vector<Row>> rows;
    for (const auto& l : detail::tokenize(text)) {
        if (detail::graph_directive(l, spec, declared)) {
            if (l.words[0] == "edge")
                edge_lines.push_back(l.number);
            continue;
        }
        const auto& w = l.words;
        if (w[0] != "cpt")
            detail::fail(ErrorCode::ParseError, l.number, "unknown directive '" + w[0] + "'");
        if (w.size() < 3 || w[2] != "|")
            detail::fail(ErrorCode::ParseError, l.number, "expected 'cpt <node> | <parent values> : <probabilities>'");
        Row row{l.number, {}, {}};
        std::size_t k = 3;
        for (; k < w.size() && w[k] != ":"; ++k)
            if (w[k] != "-")
                row.parents.push_back(detail::parse_count(w[k], l.number, "a parent value"));
        if (k == w.size())
            detail::fail(ErrorCode::ParseError, l.number, "missing ':'");
        for (++k; k < w.size(); ++k)
            row.probs.push_back(detail::parse_mass(w[k], l.number));
        if (row.probs.empty())
            detail::fail(ErrorCode::ParseError, l.number, "empty probability list");
        rows[w[1]].push_back(std::move(row));
    }
    Gdag g = detail::finish_graph(spec, edge_lines);
    for (const auto& [node, list] : rows)
        if (!g.has_node(node))
            detail::fail(ErrorCode::UnknownNode, list.front().line, "cpt for undeclared node '" + node + "'");

    std::vector<Cpt> tables(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
        const auto it = rows.find(g.label(i));
        if (it == rows.end())
            throw Error(ErrorCode::InvalidTable, "no cpt rows for node '" + g.label(i) + "'");
        tables[i].cardinality = it->second.front().probs.size();
        for_each_bit(g.parents(i), [&](std::size_t p) { tables[i].parents.push_back(g.label(p)); });
    }
    for (std::size_t i = 0; i < g.size(); ++i) {
        Cpt& t = tables[i];
        std::vector<std::size_t> cards;
        std::size_t n_rows = 1;
        for (const auto& p : t.parents) {
            cards.push_back(tables[g.index(p)].cardinality);
            n_rows *= cards.back();
        }
        std::vector<std::optional<std::vector<Rational>>> slots(n_rows);
        for (const auto& r : rows.at(g.label(i))) {
            if (r.parents.size() != cards.size())
                detail::fail(ErrorCode::InvalidTable, r.line, "expected " + std::to_string(cards.size()) +
                                                                  " parent values");
            if (r.probs.size() != t.cardinality)
                detail::fail(ErrorCode::InvalidTable, r.line, "row width differs from the node's first row");
            std::size_t off = 0;
            for (std::size_t k = 0; k < cards.size(); ++k) {
                if (r.parents[k] >= cards[k])
                    detail::fail(ErrorCode::InvalidTable, r.line, "parent value out of range");
                off = off * cards[k] + r.parents[k];
            }
            if (slots[off])
                detail::fail(ErrorCode::InvalidTable, r.line, "duplicate row for this parent assignment");
            slots[off] = r.probs;
        }
        for (auto& s : slots) {
            if (!s)
                throw Error(ErrorCode::InvalidTable, "missing cpt row for node '" + g.label(i) + "'");
            t.rows.push_back(std::move(*s));
        }
    }
    return CausalModel(std::move(g), std::move(tables));
}

inline std::string format_model(const CausalModel& m)
{
    std::string out = format_graph(m.graph());
    const Gdag& g = m.graph();
    for (std::size_t i = 0; i < g.size(); ++i) {
        const Cpt& t = m.tables()[i];
        std::vector<std::size_t> cards;
        for (const auto& p : t.parents)
            cards.push_back(m.table(p).cardinality);
        for (std::size_t r = 0; r < t.rows.size(); ++r) {
            std::vector<std::size_t> values(cards.size());
            std::size_t rest = r;
            for (std::size_t k = cards.size(); k-- > 0;) {
                values[k] = rest % cards[k];
                rest /= cards[k];
            }
            out += "cpt " + g.label(i) + " |";
            if (values.empty())
                out += " -";
            for (auto v : values)
                out += " " + std::to_string(v);
            out += " :";
            for (const auto& q : t.rows[r])
                out += " " + format_rational(q);
            out += "\n";
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Fine-grained inequality files
//
//   inequality eq1
//   exogenous A
//   sections 0 1
//   term + E D - 0        # sign, X, Y, Z, section; sets comma-separated
//   rhs D
//   end

inline std::vector<FineGrainedInequality> parse_inequalities(const std::string& text)
{
    std::vector<FineGrainedInequality> out;
    std::optional<FineGrainedInequality> cur;
    std::size_t opened = 0;
    auto need = [](const detail::Line& l, std::size_t n, const char* form) {
        if (l.words.size() != n)
            detail::fail(ErrorCode::ParseError, l.number, std::string("expected '") + form + "'");
    };
    for (const auto& l : detail::tokenize(text)) {
        const auto& w = l.words;
        if (w[0] == "inequality") {
            if (cur)
                detail::fail(ErrorCode::ParseError, l.number, "previous inequality has no 'end'");
            need(l, 2, "inequality <name>");
            cur = FineGrainedInequality{};
            cur->name = w[1];
            opened = l.number;
            continue;
        }
        if (!cur)
            detail::fail(ErrorCode::ParseError, l.number, "'" + w[0] + "' outside an inequality record");
        if (w[0] == "exogenous") {
            need(l, 2, "exogenous <variable>");
            cur->exogenous = w[1];
        } else if (w[0] == "sections") {
            if (w.size() < 2)
                detail::fail(ErrorCode::ParseError, l.number, "expected 'sections <value>...'");
            cur->sections.clear();
            for (std::size_t k = 1; k < w.size(); ++k)
                cur->sections.push_back(detail::parse_count(w[k], l.number, "a section value"));
        } else if (w[0] == "term") {
            need(l, 6, "term +|- <X> <Y> <Z> <section>");
            if (w[1] != "+" && w[1] != "-")
                detail::fail(ErrorCode::ParseError, l.number, "term sign must be + or -");
            CmiTerm t;
            t.sign = w[1] == "+" ? 1 : -1;
            try {
                t.x = parse_set(w[2]);
                t.y = parse_set(w[3]);
                t.z = parse_set(w[4]);
            } catch (const Error& e) {
                detail::fail(ErrorCode::ParseError, l.number, e.message());
            }
            t.section = detail::parse_count(w[5], l.number, "a section value");
            cur->terms.push_back(std::move(t));
        } else if (w[0] == "rhs") {
            need(l, 2, "rhs <set>");
            cur->rhs = parse_set(w[1]);
        } else if (w[0] == "end") {
            need(l, 1, "end");
            if (cur->exogenous.empty() || cur->sections.empty() || cur->terms.empty() || cur->rhs.empty())
                detail::fail(ErrorCode::ParseError, l.number, "inequality '" + cur->name +
                                                                  "' needs exogenous, sections, terms and rhs");
            for (const auto& t : cur->terms)
                if (std::find(cur->sections.begin(), cur->sections.end(), t.section) == cur->sections.end())
                    detail::fail(ErrorCode::ParseError, l.number, "term uses undeclared section " +
                                                                      std::to_string(t.section));
            out.push_back(std::move(*cur));
            cur.reset();
        } else {
            detail::fail(ErrorCode::ParseError, l.number, "unknown directive '" + w[0] + "'");
        }
    }
    if (cur)
        detail::fail(ErrorCode::ParseError, opened, "inequality '" + cur->name + "' has no 'end'");
    return out;
}

inline std::string format_inequality(const FineGrainedInequality& q)
{
    std::string out = "inequality " + q.name + "\nexogenous " + q.exogenous + "\nsections";
    for (auto s : q.sections)
        out += " " + std::to_string(s);
    out += "\n";
    for (const auto& t : q.terms)
        out += std::string("term ") + (t.sign > 0 ? "+" : "-") + " " + join_set(t.x) + " " + join_set(t.y) + " " +
               join_set(t.z) + " " + std::to_string(t.section) + "\n";
    return out + "rhs " + join_set(q.rhs) + "\nend\n";
}

// ---------------------------------------------------------------------------
// CI-syntax files: one relation per line, "X _||_ Y | Z"; a leading "!"
// marks a relation that must not hold.

struct CiLine {
    CiRelation relation;
    bool holds = true;
};

inline std::vector<CiLine> parse_ci_lines(const std::string& text)
{
    std::vector<CiLine> out;
    std::istringstream in(text);
    std::string raw;
    std::size_t n = 0;
    while (std::getline(in, raw)) {
        ++n;
        if (auto hash = raw.find('#'); hash != std::string::npos)
            raw.erase(hash);
        const auto first = raw.find_first_not_of(" \t\r");
        if (first == std::string::npos)
            continue;
        CiLine line;
        if (raw[first] == '!') {
            line.holds = false;
            raw.erase(0, first + 1);
        }
        try {
            line.relation = parse_ci(raw);
        } catch (const Error& e) {
            detail::fail(e.code(), n, e.message());
        }
        out.push_back(std::move(line));
    }
    return out;
}

inline std::string format_ci_lines(const std::vector<CiLine>& lines)
{
    std::string out;
    for (const auto& l : lines)
        out += (l.holds ? "" : "! ") + format_ci(l.relation) + "\n";
    return out;
}

inline std::string format_ci_set(const CiSet& s)
{
    std::string out;
    for (const auto& r : s)
        out += format_ci(r) + "\n";
    return out;
}

// ---------------------------------------------------------------------------
// Files

inline std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error(ErrorCode::ParseError, "cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_file(const std::string& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary);
    if (!out || !(out << text))
        throw Error(ErrorCode::ParseError, "cannot write '" + path + "'");
}

} // namespace causalgap::io
