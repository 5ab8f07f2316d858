#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>
#include <string_view>

#include "detbounds/errors.hpp"

namespace detbounds {

using BigInt = boost::multiprecision::number<boost::multiprecision::cpp_int_backend<>,
                                             boost::multiprecision::et_off>;
using Rational = boost::multiprecision::number<boost::multiprecision::cpp_rational_backend,
                                               boost::multiprecision::et_off>;

inline BigInt numer(const Rational& r) { return boost::multiprecision::numerator(r); }
inline BigInt denom(const Rational& r) { return boost::multiprecision::denominator(r); }

inline Rational make_rational(const BigInt& p, const BigInt& q) {
    if (q == 0) throw Error("zero denominator");
    return q.sign() < 0 ? Rational(-p, -q) : Rational(p, q);
}

inline int sign(const Rational& r) { return r.sign(); }
inline int sign(const BigInt& r) { return r.sign(); }

inline Rational abs(const Rational& r) { return r.sign() < 0 ? Rational(-r) : r; }

inline Rational pow(const Rational& base, unsigned exponent) {
    Rational result = 1;
    Rational b = base;
    while (exponent != 0) {
        if (exponent & 1U) result *= b;
        exponent >>= 1U;
        if (exponent != 0) b *= b;
    }
    return result;
}

/// 2^k as an exact rational (k may be negative).
inline Rational pow2(int k) {
    BigInt one = 1;
    if (k >= 0) return Rational(BigInt(one << k));
    return Rational(one, BigInt(one << -k));
}

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

/// "p/q", or "p" when the value is an integer.
inline std::string to_string(const Rational& r) {
    const BigInt q = denom(r);
    if (q == 1) return numer(r).str();
    return numer(r).str() + "/" + q.str();
}

inline std::string to_string(const BigInt& v) { return v.str(); }

namespace detail {

inline BigInt parse_integer(std::string_view text, std::string_view whole) {
    if (text.empty()) throw ParseError("malformed rational '" + std::string(whole) + "'");
    std::size_t pos = 0;
    bool negative = false;
    if (text[0] == '+' || text[0] == '-') {
        negative = text[0] == '-';
        pos = 1;
    }
    if (pos == text.size()) throw ParseError("malformed rational '" + std::string(whole) + "'");
    BigInt value = 0;
    for (; pos < text.size(); ++pos) {
        const char c = text[pos];
        if (c < '0' || c > '9') throw ParseError("malformed rational '" + std::string(whole) + "'");
        value = value * 10 + (c - '0');
    }
    return negative ? BigInt(-value) : value;
}

}  // namespace detail

/// Parses "p/q" or an integer. Surrounding whitespace is ignored.
inline Rational parse_rational(std::string_view text) {
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) throw ParseError("empty rational");
    const auto last = text.find_last_not_of(" \t\r\n");
    const std::string_view body = text.substr(first, last - first + 1);
    const auto slash = body.find('/');
    if (slash == std::string_view::npos) return Rational(detail::parse_integer(body, body));
    const BigInt p = detail::parse_integer(body.substr(0, slash), body);
    const BigInt q = detail::parse_integer(body.substr(slash + 1), body);
    if (q == 0) throw ParseError("zero denominator in '" + std::string(body) + "'");
    return q.sign() < 0 ? Rational(-p, -q) : Rational(p, q);
}

inline BigInt gcd(const BigInt& a, const BigInt& b) { return boost::multiprecision::gcd(a, b); }
inline BigInt lcm(const BigInt& a, const BigInt& b) { return boost::multiprecision::lcm(a, b); }

inline BigInt floor(const Rational& r) {
    BigInt q;
    BigInt rem;
    boost::multiprecision::divide_qr(numer(r), denom(r), q, rem);
    if (rem.sign() < 0) q -= 1;
    return q;
}

}  // namespace detbounds
