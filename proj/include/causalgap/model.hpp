#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "causalgap/distribution.hpp"
#include "causalgap/error.hpp"
#include "causalgap/graph.hpp"
#include "causalgap/rational.hpp"

namespace causalgap {

/// P(node | parents). Parents are listed in graph declaration order and rows
/// are indexed row-major over their values (last parent fastest).
struct Cpt {
    std::size_t cardinality = 2;
    std::vector<std::string> parents;
    std::vector<std::vector<Rational>> rows;
};

/// A classical causal model: a GDAG plus one conditional table per node.
class CausalModel {
public:
    CausalModel(Gdag graph, std::vector<Cpt> tables) : graph_(std::move(graph)), tables_(std::move(tables))
    {
        if (tables_.size() != graph_.size())
            throw Error(ErrorCode::InvalidTable, "expected one table per node");
        for (std::size_t i = 0; i < graph_.size(); ++i) {
            const auto& t = tables_[i];
            const std::string& node = graph_.label(i);
            if (t.cardinality == 0)
                throw Error(ErrorCode::InvalidTable, "node '" + node + "' has cardinality 0");
            std::vector<std::string> expected;
            for_each_bit(graph_.parents(i), [&](std::size_t p) { expected.push_back(graph_.label(p)); });
            if (t.parents != expected)
                throw Error(ErrorCode::InvalidTable, "table for '" + node + "' lists the wrong parents");
        }
        for (std::size_t i = 0; i < graph_.size(); ++i) {
            const auto& t = tables_[i];
            const std::string& node = graph_.label(i);
            std::size_t rows = 1;
            for (const auto& p : t.parents)
                rows *= tables_[graph_.index(p)].cardinality;
            if (t.rows.size() != rows)
                throw Error(ErrorCode::InvalidTable, "table for '" + node + "' has " + std::to_string(t.rows.size()) +
                                                         " rows, expected " + std::to_string(rows));
            for (const auto& row : t.rows) {
                if (row.size() != t.cardinality)
                    throw Error(ErrorCode::InvalidTable, "row width mismatch in table for '" + node + "'");
                Rational sum = 0;
                for (const auto& q : row) {
                    if (q < 0)
                        throw Error(ErrorCode::InvalidTable, "negative entry in table for '" + node + "'");
                    sum += q;
                }
                if (sum != 1)
                    throw Error(ErrorCode::InvalidTable, "a row of the table for '" + node + "' sums to " +
                                                             format_rational(sum));
            }
        }
    }

    const Gdag& graph() const { return graph_; }
    const std::vector<Cpt>& tables() const { return tables_; }
    const Cpt& table(const std::string& node) const { return tables_[graph_.index(node)]; }

    std::vector<Variable> variables() const
    {
        std::vector<Variable> out;
        for (std::size_t i = 0; i < graph_.size(); ++i)
            out.push_back({graph_.label(i), tables_[i].cardinality});
        return out;
    }

private:
    Gdag graph_;
    std::vector<Cpt> tables_;
};

/// Joint distribution over every node (declaration order), as the product of
/// the conditional tables.
inline DiscreteDistribution simulate_model(const CausalModel& m)
{
    const Gdag& g = m.graph();
    const auto vars = m.variables();
    DiscreteDistribution shape = DiscreteDistribution::point_mass(vars, Assignment(vars.size(), 0));
    std::vector<std::vector<std::size_t>> parent_pos(g.size());
    for (std::size_t i = 0; i < g.size(); ++i)
        for_each_bit(g.parents(i), [&](std::size_t p) { parent_pos[i].push_back(p); });
    std::vector<Rational> mass(shape.table_size());
    std::size_t off = 0;
    shape.for_each([&](const Assignment& a, const Rational&) {
        Rational prob = 1;
        for (std::size_t i = 0; i < g.size() && prob != 0; ++i) {
            const Cpt& t = m.tables()[i];
            std::size_t row = 0;
            for (auto p : parent_pos[i])
                row = row * m.tables()[p].cardinality + a[p];
            prob *= t.rows[row][a[i]];
        }
        mass[off++] = prob;
    });
    return DiscreteDistribution(vars, std::move(mass));
}

inline DiscreteDistribution observed_marginal(const CausalModel& m)
{
    return marginalize(simulate_model(m), m.graph().observed_nodes());
}

/// Reproducible random model. Each table row is a random composition of
/// `denominator` into `cardinality` parts, so every entry is a multiple of
/// 1/denominator.
inline CausalModel random_model(const Gdag& g, const std::vector<std::size_t>& cardinalities, std::uint64_t seed,
                                std::uint32_t denominator = 64)
{
    if (cardinalities.size() != g.size())
        throw Error(ErrorCode::InvalidTable, "expected one cardinality per node");
    if (denominator == 0)
        throw Error(ErrorCode::InvalidTable, "denominator must be positive");
    std::mt19937_64 rng(seed);
    std::vector<Cpt> tables(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
        Cpt& t = tables[i];
        t.cardinality = cardinalities[i];
        std::size_t rows = 1;
        for_each_bit(g.parents(i), [&](std::size_t p) {
            t.parents.push_back(g.label(p));
            rows *= cardinalities[p];
        });
        std::uniform_int_distribution<std::uint32_t> cut(0, denominator);
        for (std::size_t r = 0; r < rows; ++r) {
            std::vector<std::uint32_t> cuts{0, denominator};
            for (std::size_t k = 1; k < t.cardinality; ++k)
                cuts.push_back(cut(rng));
            std::sort(cuts.begin(), cuts.end());
            std::vector<Rational> row;
            for (std::size_t k = 0; k < t.cardinality; ++k)
                row.emplace_back(cuts[k + 1] - cuts[k], denominator);
            t.rows.push_back(std::move(row));
        }
    }
    return CausalModel(g, std::move(tables));
}

inline CausalModel random_model(const Gdag& g, std::size_t cardinality, std::uint64_t seed,
                                std::uint32_t denominator = 64)
{
    return random_model(g, std::vector<std::size_t>(g.size(), cardinality), seed, denominator);
}

} // namespace causalgap
