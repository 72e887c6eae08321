#pragma once

#include <string>

#include <boost/multiprecision/gmp.hpp>

#include "causalgap/error.hpp"

namespace causalgap {

/// Exact probability mass. GMP-backed so products of many bounded-denominator
/// conditional probabilities never overflow.
using Rational = boost::multiprecision::mpq_rational;

/// Parses "n", "n/d" or "-n/d". Denominators must be positive.
inline Rational parse_rational(const std::string& text)
{
    const auto slash = text.find('/');
    auto is_int = [](const std::string& s, bool allow_sign) {
        if (s.empty())
            return false;
        std::size_t i = (allow_sign && (s[0] == '-' || s[0] == '+')) ? 1 : 0;
        if (i == s.size())
            return false;
        for (; i < s.size(); ++i)
            if (s[i] < '0' || s[i] > '9')
                return false;
        return true;
    };
    if (slash == std::string::npos) {
        if (!is_int(text, true))
            throw Error(ErrorCode::ParseError, "not a rational number: '" + text + "'");
        return Rational(boost::multiprecision::mpz_int(text));
    }
    const std::string num = text.substr(0, slash);
    const std::string den = text.substr(slash + 1);
    if (!is_int(num, true) || !is_int(den, false))
        throw Error(ErrorCode::ParseError, "not a rational number: '" + text + "'");
    boost::multiprecision::mpz_int d(den);
    if (d == 0)
        throw Error(ErrorCode::ParseError, "zero denominator in '" + text + "'");
    return Rational(boost::multiprecision::mpz_int(num), d);
}

/// Lowest-terms "n/d", or "n" when the denominator is 1.
inline std::string format_rational(const Rational& r)
{
    const auto num = boost::multiprecision::numerator(r);
    const auto den = boost::multiprecision::denominator(r);
    if (den == 1)
        return num.str();
    return num.str() + "/" + den.str();
}

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

} // namespace causalgap
