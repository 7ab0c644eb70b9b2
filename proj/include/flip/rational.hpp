#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <stdexcept>
#include <string>

namespace flip {

using Rational = boost::multiprecision::cpp_rational;

inline double to_double(const Rational& q) { return q.convert_to<double>(); }

namespace detail {

// cpp_int's string constructor treats a leading zero as an octal prefix
inline boost::multiprecision::cpp_int parse_int(std::string digits) {
    bool neg = false;
    if (!digits.empty() && (digits[0] == '+' || digits[0] == '-')) {
        neg = digits[0] == '-';
        digits.erase(digits.begin());
    }
    size_t keep = digits.find_first_not_of('0');
    if (keep == std::string::npos) keep = digits.size() - (digits.empty() ? 0 : 1);
    digits.erase(0, keep);
    if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos)
        throw std::invalid_argument("bad integer literal");
    boost::multiprecision::cpp_int v(digits);
    return neg ? -v : v;
}

}  // namespace detail

// Accepts "a/b", plain integers, and decimal literals ("0.296706" becomes 296706/10^6).
inline Rational parse_rational(const std::string& text) {
    if (text.empty()) throw std::invalid_argument("empty rational literal");
    try {
        auto slash = text.find('/');
        if (slash != std::string::npos) {
            Rational num(detail::parse_int(text.substr(0, slash)));
            Rational den(detail::parse_int(text.substr(slash + 1)));
            if (den == 0) throw std::invalid_argument("zero denominator");
            return num / den;
        }
        auto dot = text.find('.');
        if (dot == std::string::npos) return Rational(detail::parse_int(text));
        bool neg = !text.empty() && text[0] == '-';
        std::string digits = text.substr(0, dot) + text.substr(dot + 1);
        if (neg || (!digits.empty() && digits[0] == '+')) digits.erase(digits.begin());
        Rational value{detail::parse_int(digits)};
        boost::multiprecision::cpp_int den = 1;
        for (size_t i = dot + 1; i < text.size(); ++i) den *= 10;
        value /= Rational(den);
        return neg ? -value : value;
    } catch (const std::invalid_argument&) {
        throw std::invalid_argument("bad rational literal '" + text + "'");
    }
}

}  // namespace flip
