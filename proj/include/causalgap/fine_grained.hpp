#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "causalgap/distribution.hpp"
#include "causalgap/entropy.hpp"
#include "causalgap/error.hpp"
#include "causalgap/graph.hpp"

namespace causalgap {

/// sign * I(X:Y|Z) evaluated on the section where the exogenous variable
/// takes `section`.
struct CmiTerm {
    int sign = 1;
    NodeSet x, y, z;
    std::size_t section = 0;
};

/// sum of signed section-wise CMI terms <= H(rhs).
struct FineGrainedInequality {
    std::string name;
    std::string exogenous;
    std::vector<std::size_t> sections;
    std::vector<CmiTerm> terms;
    NodeSet rhs;

    NodeSet variables() const
    {
        NodeSet out{exogenous};
        for (const auto& t : terms)
            out = set_union(out, set_union(set_union(t.x, t.y), t.z));
        return set_union(out, rhs);
    }
};

struct InequalityEvaluation {
    double lhs = 0.0;
    double rhs = 0.0;
    bool violated() const { return lhs > rhs + inequality_tolerance; }
};

inline FineGrainedInequality eq1_inequality()
{
    FineGrainedInequality q;
    q.name = "eq1";
    q.exogenous = "A";
    q.sections = {0, 1};
    q.terms = {
        {+1, {"E"}, {"D"}, {}, 0},
        {-1, {"F"}, {"D"}, {}, 0},
        {+1, {"F"}, {"D"}, {}, 1},
        {-1, {"E"}, {"D"}, {}, 1},
    };
    q.rhs = {"D"};
    return q;
}

/// Post-intervention distribution at `value`. With a graph the exogeneity of
/// the variable is checked; without one the caller vouches for it.
inline DiscreteDistribution section_distribution(const DiscreteDistribution& p, const std::string& z,
                                                 std::size_t value, const Gdag* g = nullptr)
{
    if (g != nullptr)
        return intervene_exogenous(p, *g, z, value);
    DiscreteDistribution out = condition(p, {{z, value}});
    out.record_intervention(z, value);
    return out;
}

inline InequalityEvaluation evaluate(const FineGrainedInequality& q, const DiscreteDistribution& p,
                                     const Gdag* g = nullptr)
{
    for (const auto& v : q.variables())
        if (!p.has_variable(v))
            throw Error(ErrorCode::MissingVariable, "inequality " + q.name + " needs variable '" + v + "'");
    for (const auto& t : q.terms)
        if (std::find(q.sections.begin(), q.sections.end(), t.section) == q.sections.end())
            throw Error(ErrorCode::ParseError, "term uses undeclared section " + std::to_string(t.section));
    std::vector<std::optional<DiscreteDistribution>> sectioned(q.sections.size());
    InequalityEvaluation out;
    for (const auto& t : q.terms) {
        const auto k = static_cast<std::size_t>(
            std::find(q.sections.begin(), q.sections.end(), t.section) - q.sections.begin());
        if (!sectioned[k])
            sectioned[k] = section_distribution(p, q.exogenous, t.section, g);
        out.lhs += t.sign * conditional_mutual_information(*sectioned[k], t.x, t.y, t.z);
    }
    out.rhs = shannon_entropy(p, q.rhs);
    return out;
}

inline InequalityEvaluation fine_grained_lhs_eq1(const DiscreteDistribution& p, const Gdag* g = nullptr)
{
    return evaluate(eq1_inequality(), p, g);
}

/// Binary A, D uniform; F = A D; E = (A xor 1) D.
inline DiscreteDistribution tilde_p()
{
    const Rational q(1, 4);
    return DiscreteDistribution::from_rows({{"A", 2}, {"D", 2}, {"E", 2}, {"F", 2}},
                                           {{{0, 0, 0, 0}, q}, {{0, 1, 1, 0}, q}, {{1, 0, 0, 0}, q}, {{1, 1, 0, 1}, q}});
}

/// As tilde_p, but E = (A xor 1) D + 2A takes three values so that E
/// reveals A.
inline DiscreteDistribution tilde_p_prime()
{
    const Rational q(1, 4);
    return DiscreteDistribution::from_rows({{"A", 2}, {"D", 2}, {"E", 3}, {"F", 2}},
                                           {{{0, 0, 0, 0}, q}, {{0, 1, 1, 0}, q}, {{1, 0, 2, 0}, q}, {{1, 1, 2, 1}, q}});
}

/// Intermediate quantities of the eq1 upper-bound argument, evaluated on a
/// joint distribution that includes the latent variables B and C.
struct Eq1Bounds {
    double q0 = 0, r0 = 0, q1 = 0, r1 = 0;
    double q0_bound = 0; // H(C) - H(CD)
    double r1_bound = 0; // H(B) - H(BD)
    double h_d = 0;      // H(D), bounds -R0 and -Q1
    double lhs_bound = 0; // H(B) + H(C) - H(CD) - H(BD) + 2 H(D)
};

inline Eq1Bounds eq1_bounds(const DiscreteDistribution& full)
{
    for (const char* v : {"A", "B", "C", "D", "E", "F"})
        if (!full.has_variable(v))
            throw Error(ErrorCode::MissingVariable, std::string("bounds need variable '") + v + "'");
    const DiscreteDistribution s0 = section_distribution(full, "A", 0);
    const DiscreteDistribution s1 = section_distribution(full, "A", 1);
    auto h = [](const DiscreteDistribution& p, const NodeSet& s) { return shannon_entropy(p, s); };
    Eq1Bounds b;
    b.q0 = h(s0, {"E"}) - h(s0, {"D", "E"});
    b.r0 = h(s0, {"F"}) - h(s0, {"D", "F"});
    b.q1 = h(s1, {"E"}) - h(s1, {"D", "E"});
    b.r1 = h(s1, {"F"}) - h(s1, {"D", "F"});
    b.q0_bound = h(full, {"C"}) - h(full, {"C", "D"});
    b.r1_bound = h(full, {"B"}) - h(full, {"B", "D"});
    b.h_d = h(full, {"D"});
    b.lhs_bound = b.q0_bound + b.r1_bound + 2 * b.h_d;
    return b;
}

} // namespace causalgap
