#pragma once

#include <bit>
#include <cstdint>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace causalgap {

using NodeSet = std::set<std::string>;

/// Bitmask over node indices of one graph; graphs are capped at 64 nodes.
using Mask = std::uint64_t;

inline constexpr std::size_t max_nodes = 64;

inline constexpr Mask bit(std::size_t i) { return Mask{1} << i; }

inline constexpr bool contains(Mask m, std::size_t i) { return (m >> i) & 1U; }

inline constexpr int popcount(Mask m) { return std::popcount(m); }

/// Calls fn(sub) for every subset of `m`, the empty set first and `m` last.
template <typename Fn>
void for_each_subset(Mask m, Fn&& fn)
{
    Mask sub = 0;
    while (true) {
        fn(sub);
        if (sub == m)
            break;
        sub = (sub - m) & m;
    }
}

/// Calls fn(i) for each set bit, lowest index first.
template <typename Fn>
void for_each_bit(Mask m, Fn&& fn)
{
    while (m != 0) {
        const int i = std::countr_zero(m);
        fn(static_cast<std::size_t>(i));
        m &= m - 1;
    }
}

inline bool disjoint(const NodeSet& a, const NodeSet& b)
{
    for (const auto& x : a)
        if (b.count(x))
            return false;
    return true;
}

inline NodeSet set_union(const NodeSet& a, const NodeSet& b)
{
    NodeSet out = a;
    out.insert(b.begin(), b.end());
    return out;
}

/// "{A,B}" with members in label order; the empty set prints as "{}".
inline std::string format_set(const NodeSet& s)
{
    std::ostringstream os;
    os << '{';
    bool first = true;
    for (const auto& x : s) {
        if (!first)
            os << ',';
        os << x;
        first = false;
    }
    os << '}';
    return os.str();
}

/// Comma-separated members; "-" denotes the empty set.
inline std::string join_set(const NodeSet& s)
{
    if (s.empty())
        return "-";
    std::string out;
    for (const auto& x : s) {
        if (!out.empty())
            out += ',';
        out += x;
    }
    return out;
}

/// Inverse of join_set. Whitespace around members is ignored.
inline NodeSet parse_set(const std::string& text)
{
    NodeSet out;
    std::string trimmed;
    for (char c : text)
        if (c != ' ' && c != '\t')
            trimmed += c;
    if (trimmed.empty() || trimmed == "-")
        return out;
    std::string cur;
    for (char c : trimmed) {
        if (c == ',') {
            if (!cur.empty())
                out.insert(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!cur.empty())
        out.insert(cur);
    return out;
}

/// Size first, then lexicographic on the sorted member lists.
inline bool set_order_less(const NodeSet& a, const NodeSet& b)
{
    if (a.size() != b.size())
        return a.size() < b.size();
    return std::vector<std::string>(a.begin(), a.end()) < std::vector<std::string>(b.begin(), b.end());
}

} // namespace causalgap
