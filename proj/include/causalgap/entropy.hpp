#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "causalgap/distribution.hpp"
#include "causalgap/error.hpp"
#include "causalgap/node_set.hpp"

namespace causalgap {

inline constexpr double inequality_tolerance = 1e-9;
inline constexpr double identity_tolerance = 1e-12;

/// Shannon entropy in bits of the marginal on `s`, with 0 log 0 = 0.
inline double shannon_entropy(const DiscreteDistribution& p, const NodeSet& s)
{
    require_variables(p, s);
    if (s.empty())
        return 0.0;
    const DiscreteDistribution m = marginalize(p, s);
    double h = 0.0;
    for (const auto& mass : m.masses()) {
        if (mass == 0)
            continue;
        const double q = to_double(mass);
        h -= q * std::log2(q);
    }
    return h;
}

/// I(X:Y|Z) = H(XZ) + H(YZ) - H(XYZ) - H(Z). Rounding noise in
/// [-1e-12, 0) is clamped to zero.
inline double conditional_mutual_information(const DiscreteDistribution& p, const NodeSet& x, const NodeSet& y,
                                             const NodeSet& z)
{
    if (!disjoint(x, y) || !disjoint(x, z) || !disjoint(y, z))
        throw Error(ErrorCode::OverlappingSets, "mutual information arguments must be disjoint");
    const NodeSet xz = set_union(x, z);
    const NodeSet yz = set_union(y, z);
    const double i = shannon_entropy(p, xz) + shannon_entropy(p, yz) - shannon_entropy(p, set_union(xz, y)) -
                     shannon_entropy(p, z);
    if (i < 0 && i >= -identity_tolerance)
        return 0.0;
    return i;
}

inline double mutual_information(const DiscreteDistribution& p, const NodeSet& x, const NodeSet& y)
{
    return conditional_mutual_information(p, x, y, {});
}

/// Entropies of every subset of a ground set, indexed by bitmask over
/// `ground` (bit i is ground[i]). Missing entries make the vector incomplete.
class EntropyVector {
public:
    static constexpr std::size_t max_variables = 20;

    explicit EntropyVector(std::vector<std::string> ground) : ground_(std::move(ground))
    {
        if (ground_.size() > max_variables)
            throw Error(ErrorCode::TooManyVariables, "entropy vectors are limited to 20 variables");
        entries_.assign(std::size_t{1} << ground_.size(), std::nullopt);
    }

    const std::vector<std::string>& ground() const { return ground_; }
    std::size_t subsets() const { return entries_.size(); }

    void set(Mask subset, double h) { entries_.at(subset) = h; }
    const std::optional<double>& get(Mask subset) const { return entries_.at(subset); }

    double at(const NodeSet& s) const
    {
        const auto& v = entries_.at(mask(s));
        if (!v)
            throw Error(ErrorCode::IncompleteVector, "no entry for " + format_set(s));
        return *v;
    }

    Mask mask(const NodeSet& s) const
    {
        Mask m = 0;
        for (const auto& x : s) {
            bool found = false;
            for (std::size_t i = 0; i < ground_.size(); ++i) {
                if (ground_[i] == x) {
                    m |= bit(i);
                    found = true;
                }
            }
            if (!found)
                throw Error(ErrorCode::UnknownVariable, "'" + x + "' is not in the ground set");
        }
        return m;
    }

    NodeSet set_of(Mask m) const
    {
        NodeSet out;
        for_each_bit(m, [&](std::size_t i) { out.insert(ground_[i]); });
        return out;
    }

    bool complete() const
    {
        for (const auto& e : entries_)
            if (!e)
                return false;
        return true;
    }

private:
    std::vector<std::string> ground_;
    std::vector<std::optional<double>> entries_;
};

inline EntropyVector entropy_vector(const DiscreteDistribution& p)
{
    if (p.arity() > EntropyVector::max_variables)
        throw Error(ErrorCode::TooManyVariables, "entropy vectors are limited to 20 variables");
    EntropyVector v(p.names());
    for (Mask m = 0; m < v.subsets(); ++m)
        v.set(m, shannon_entropy(p, v.set_of(m)));
    return v;
}

struct PolymatroidViolation {
    std::string kind; // "normalization", "monotonicity" or "submodularity"
    std::string inequality;
    double slack = 0.0; // amount by which the inequality fails
};

/// Checks H(empty) = 0, monotonicity H(V - {i}) <= H(V) and the elemental
/// submodularity H(X) + H(Xij) <= H(Xi) + H(Xj). The elemental forms imply
/// the full polymatroid cone.
inline std::vector<PolymatroidViolation> check_polymatroid(const EntropyVector& v,
                                                          double tolerance = inequality_tolerance)
{
    if (!v.complete())
        throw Error(ErrorCode::IncompleteVector, "entropy vector has missing entries");
    std::vector<PolymatroidViolation> out;
    auto h = [&](Mask m) { return *v.get(m); };
    auto name = [&](Mask m) { return "H(" + join_set(v.set_of(m)) + ")"; };
    const std::size_t n = v.ground().size();
    const Mask all = n == 0 ? 0 : (bit(n) - 1);

    if (std::abs(h(0)) > tolerance)
        out.push_back({"normalization", "H(-) = 0", std::abs(h(0))});
    for (std::size_t i = 0; i < n; ++i) {
        const Mask rest = all & ~bit(i);
        const double slack = h(rest) - h(all);
        if (slack > tolerance)
            out.push_back({"monotonicity", name(rest) + " <= " + name(all), slack});
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const Mask others = all & ~bit(i) & ~bit(j);
            for_each_subset(others, [&](Mask x) {
                const double slack = h(x) + h(x | bit(i) | bit(j)) - h(x | bit(i)) - h(x | bit(j));
                if (slack > tolerance)
                    out.push_back({"submodularity",
                                   name(x) + " + " + name(x | bit(i) | bit(j)) + " <= " + name(x | bit(i)) +
                                       " + " + name(x | bit(j)),
                                   slack});
            });
        }
    }
    return out;
}

} // namespace causalgap
