#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "causalgap/error.hpp"
#include "causalgap/graph.hpp"
#include "causalgap/node_set.hpp"
#include "causalgap/rational.hpp"

namespace causalgap {

struct Variable {
    std::string name;
    std::size_t cardinality = 2;

    friend bool operator==(const Variable&, const Variable&) = default;
};

/// One value per variable, in the distribution's variable order. Values are
/// 0-based: a variable of cardinality k takes values 0..k-1.
using Assignment = std::vector<std::size_t>;

/// Values for a subset of variables, keyed by name.
using PartialAssignment = std::map<std::string, std::size_t>;

/// Exact joint distribution over finitely many discrete variables, stored
/// densely in row-major order (the last variable varies fastest).
class DiscreteDistribution {
public:
    static constexpr std::size_t max_table_size = std::size_t{1} << 24;

    DiscreteDistribution() : mass_{Rational(1)} {}

    /// `mass` lists every entry of the product domain in row-major order.
    DiscreteDistribution(std::vector<Variable> variables, std::vector<Rational> mass)
        : variables_(std::move(variables)), mass_(std::move(mass))
    {
        check_variables();
        if (mass_.size() != table_size())
            throw Error(ErrorCode::InvalidTable, "mass table has " + std::to_string(mass_.size()) +
                                                     " entries, domain has " + std::to_string(table_size()));
        Rational total = 0;
        for (const auto& m : mass_) {
            if (m < 0)
                throw Error(ErrorCode::InvalidTable, "negative probability mass");
            total += m;
        }
        if (total != 1)
            throw Error(ErrorCode::NotNormalized, "masses sum to " + format_rational(total) + ", not 1");
    }

    /// Sparse construction; assignments not listed have mass zero.
    static DiscreteDistribution from_rows(std::vector<Variable> variables,
                                          const std::vector<std::pair<Assignment, Rational>>& rows)
    {
        DiscreteDistribution shape;
        shape.variables_ = variables;
        shape.check_variables();
        std::vector<Rational> mass(shape.table_size(), Rational(0));
        for (const auto& [a, m] : rows)
            mass[shape.offset(a)] += m;
        return DiscreteDistribution(std::move(variables), std::move(mass));
    }

    static DiscreteDistribution point_mass(std::vector<Variable> variables, const Assignment& at)
    {
        return from_rows(std::move(variables), {{at, Rational(1)}});
    }

    const std::vector<Variable>& variables() const { return variables_; }
    std::size_t arity() const { return variables_.size(); }
    const std::vector<Rational>& masses() const { return mass_; }

    std::vector<std::string> names() const
    {
        std::vector<std::string> out;
        for (const auto& v : variables_)
            out.push_back(v.name);
        return out;
    }

    NodeSet name_set() const
    {
        NodeSet out;
        for (const auto& v : variables_)
            out.insert(v.name);
        return out;
    }

    bool has_variable(const std::string& name) const
    {
        for (const auto& v : variables_)
            if (v.name == name)
                return true;
        return false;
    }

    std::size_t position(const std::string& name) const
    {
        for (std::size_t i = 0; i < variables_.size(); ++i)
            if (variables_[i].name == name)
                return i;
        throw Error(ErrorCode::UnknownVariable, "no variable '" + name + "'");
    }

    std::size_t table_size() const
    {
        std::size_t n = 1;
        for (const auto& v : variables_)
            n *= v.cardinality;
        return n;
    }

    std::size_t offset(const Assignment& a) const
    {
        if (a.size() != variables_.size())
            throw Error(ErrorCode::DomainMismatch, "assignment has " + std::to_string(a.size()) + " values for " +
                                                       std::to_string(variables_.size()) + " variables");
        std::size_t off = 0;
        for (std::size_t i = 0; i < a.size(); ++i) {
            if (a[i] >= variables_[i].cardinality)
                throw Error(ErrorCode::DomainMismatch, "value " + std::to_string(a[i]) + " out of range for '" +
                                                           variables_[i].name + "'");
            off = off * variables_[i].cardinality + a[i];
        }
        return off;
    }

    Assignment assignment(std::size_t off) const
    {
        Assignment a(variables_.size());
        for (std::size_t i = variables_.size(); i-- > 0;) {
            a[i] = off % variables_[i].cardinality;
            off /= variables_[i].cardinality;
        }
        return a;
    }

    const Rational& prob(const Assignment& a) const { return mass_[offset(a)]; }

    /// Calls fn(assignment, mass) for every entry, zeros included.
    template <typename Fn>
    void for_each(Fn&& fn) const
    {
        Assignment a(variables_.size(), 0);
        for (std::size_t off = 0; off < mass_.size(); ++off) {
            fn(static_cast<const Assignment&>(a), mass_[off]);
            for (std::size_t i = a.size(); i-- > 0;) {
                if (++a[i] < variables_[i].cardinality)
                    break;
                a[i] = 0;
            }
        }
    }

    /// Exogenous interventions applied to produce this distribution, in order.
    const std::vector<std::pair<std::string, std::size_t>>& interventions() const { return interventions_; }

    void record_intervention(const std::string& name, std::size_t value) { interventions_.emplace_back(name, value); }

    /// Exact equality of domain and masses; intervention metadata is ignored.
    friend bool operator==(const DiscreteDistribution& a, const DiscreteDistribution& b)
    {
        return a.variables_ == b.variables_ && a.mass_ == b.mass_;
    }

private:
    void check_variables() const
    {
        NodeSet seen;
        std::size_t n = 1;
        for (const auto& v : variables_) {
            if (v.name.empty())
                throw Error(ErrorCode::ParseError, "empty variable name");
            if (!seen.insert(v.name).second)
                throw Error(ErrorCode::DuplicateLabel, "variable '" + v.name + "' declared twice");
            if (v.cardinality == 0)
                throw Error(ErrorCode::InvalidTable, "variable '" + v.name + "' has cardinality 0");
            n *= v.cardinality;
            if (n > max_table_size)
                throw Error(ErrorCode::TooManyVariables, "joint table exceeds 2^24 entries");
        }
    }

    std::vector<Variable> variables_;
    std::vector<Rational> mass_;
    std::vector<std::pair<std::string, std::size_t>> interventions_;
};

inline void require_variables(const DiscreteDistribution& p, const NodeSet& names)
{
    for (const auto& n : names)
        if (!p.has_variable(n))
            throw Error(ErrorCode::UnknownVariable, "no variable '" + n + "'");
}

/// Sums out every variable not in `keep`; kept variables retain their order.
inline DiscreteDistribution marginalize(const DiscreteDistribution& p, const NodeSet& keep)
{
    require_variables(p, keep);
    std::vector<std::size_t> kept_pos;
    std::vector<Variable> kept;
    for (std::size_t i = 0; i < p.arity(); ++i) {
        if (keep.count(p.variables()[i].name)) {
            kept_pos.push_back(i);
            kept.push_back(p.variables()[i]);
        }
    }
    if (kept.size() == p.arity())
        return p;
    std::vector<std::size_t> stride(kept.size(), 1);
    for (std::size_t i = kept.size(); i-- > 1;)
        stride[i - 1] = stride[i] * kept[i].cardinality;
    std::size_t size = 1;
    for (const auto& v : kept)
        size *= v.cardinality;
    std::vector<Rational> mass(size, Rational(0));
    p.for_each([&](const Assignment& a, const Rational& m) {
        if (m == 0)
            return;
        std::size_t off = 0;
        for (std::size_t k = 0; k < kept_pos.size(); ++k)
            off += a[kept_pos[k]] * stride[k];
        mass[off] += m;
    });
    return DiscreteDistribution(std::move(kept), std::move(mass));
}

/// Probability of the event that every variable in `given` takes its listed value.
inline Rational event_probability(const DiscreteDistribution& p, const PartialAssignment& given)
{
    std::vector<std::pair<std::size_t, std::size_t>> fixed;
    for (const auto& [name, value] : given)
        fixed.emplace_back(p.position(name), value);
    Rational total = 0;
    p.for_each([&](const Assignment& a, const Rational& m) {
        for (auto [pos, value] : fixed)
            if (a[pos] != value)
                return;
        total += m;
    });
    return total;
}

/// P(rest | given); the conditioned variables are removed from the domain.
inline DiscreteDistribution condition(const DiscreteDistribution& p, const PartialAssignment& given)
{
    std::vector<std::pair<std::size_t, std::size_t>> fixed;
    for (const auto& [name, value] : given) {
        const auto pos = p.position(name);
        if (value >= p.variables()[pos].cardinality)
            throw Error(ErrorCode::DomainMismatch, "value " + std::to_string(value) + " out of range for '" + name + "'");
        fixed.emplace_back(pos, value);
    }
    const Rational norm = event_probability(p, given);
    if (norm == 0) {
        std::string text;
        for (const auto& [name, value] : given)
            text += (text.empty() ? "" : ",") + name + "=" + std::to_string(value);
        throw Error(ErrorCode::ZeroProbabilityEvent, "P(" + text + ") = 0");
    }
    std::vector<Variable> rest;
    std::vector<bool> is_fixed(p.arity(), false);
    for (auto [pos, value] : fixed)
        is_fixed[pos] = true;
    for (std::size_t i = 0; i < p.arity(); ++i)
        if (!is_fixed[i])
            rest.push_back(p.variables()[i]);
    std::vector<Rational> mass;
    mass.reserve(p.table_size());
    p.for_each([&](const Assignment& a, const Rational& m) {
        for (auto [pos, value] : fixed)
            if (a[pos] != value)
                return;
        mass.push_back(m / norm);
    });
    DiscreteDistribution out(std::move(rest), std::move(mass));
    for (const auto& rec : p.interventions())
        out.record_intervention(rec.first, rec.second);
    return out;
}

/// Post-intervention distribution P(rest | do(z = value)). Only licensed
/// when z is an observed node without parents, where it coincides with
/// conditioning on z = value.
inline DiscreteDistribution intervene_exogenous(const DiscreteDistribution& p, const Gdag& g, const std::string& z,
                                                std::size_t value)
{
    const auto i = g.index(z);
    if (!g.observed(i) || g.parents(i) != 0)
        throw Error(ErrorCode::NotExogenous, "'" + z + "' is not an exogenous observed node");
    DiscreteDistribution out = condition(p, {{z, value}});
    out.record_intervention(z, value);
    return out;
}

/// True iff p and q agree on every entry where the variables in `section`
/// take the listed values.
inline bool section_compatible(const DiscreteDistribution& p, const DiscreteDistribution& q,
                               const PartialAssignment& section)
{
    if (p.variables() != q.variables())
        throw Error(ErrorCode::DomainMismatch, "distributions are over different domains");
    std::vector<std::pair<std::size_t, std::size_t>> fixed;
    for (const auto& [name, value] : section)
        fixed.emplace_back(p.position(name), value);
    bool equal = true;
    std::size_t off = 0;
    p.for_each([&](const Assignment& a, const Rational& m) {
        const std::size_t here = off++;
        if (!equal)
            return;
        for (auto [pos, value] : fixed)
            if (a[pos] != value)
                return;
        if (m != q.masses()[here])
            equal = false;
    });
    return equal;
}

} // namespace causalgap
