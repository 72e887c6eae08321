#pragma once

#include <cstdio>
#include <string>

#include <json.hpp>

#include "causalgap/interestingness.hpp"
#include "causalgap/io.hpp"

namespace causalgap {

inline nlohmann::json distribution_to_json(const DiscreteDistribution& p)
{
    nlohmann::json j;
    j["variables"] = nlohmann::json::array();
    for (const auto& v : p.variables())
        j["variables"].push_back({{"name", v.name}, {"cardinality", v.cardinality}});
    j["rows"] = nlohmann::json::array();
    p.for_each([&](const Assignment& a, const Rational& m) {
        if (m != 0)
            j["rows"].push_back({{"values", a}, {"p", format_rational(m)}});
    });
    return j;
}

inline nlohmann::json verdict_to_json(const Verdict& v)
{
    nlohmann::json j;
    j["status"] = to_string(v.status);
    j["method"] = to_string(v.method);
    j["summary"] = v.summary();
    if (v.certificate) {
        const auto& c = *v.certificate;
        j["certificate"] = {{"x", c.x}, {"y", c.y}, {"z", c.z}, {"w", c.w}};
    } else {
        j["certificate"] = nullptr;
    }
    if (v.witness) {
        const auto& w = *v.witness;
        j["witness"] = {{"violated_constraint", w.violated_constraint},
                        {"lhs", w.lhs},
                        {"rhs", w.rhs},
                        {"distribution", distribution_to_json(w.distribution)}};
    } else {
        j["witness"] = nullptr;
    }
    j["trace"] = v.trace;
    return j;
}

inline std::string format_real(double x)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", x);
    return buf;
}

/// Summary line, then the method trace and any witness table.
inline std::string format_verdict(const Verdict& v)
{
    std::string out = v.summary() + "\n";
    for (const auto& t : v.trace)
        out += "  " + t + "\n";
    if (v.witness) {
        out += "  witness (" + v.witness->violated_constraint + ": lhs=" + format_real(v.witness->lhs) +
               " rhs=" + format_real(v.witness->rhs) + "):\n";
        std::string table = io::format_distribution(v.witness->distribution);
        for (std::size_t start = 0; start < table.size();) {
            const auto end = table.find('\n', start);
            out += "    " + table.substr(start, end - start) + "\n";
            start = end + 1;
        }
    }
    return out;
}

} // namespace causalgap
