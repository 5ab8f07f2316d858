#pragma once

#include <cmath>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>

#include "detbounds/matrix.hpp"
#include "detbounds/polynomial.hpp"

namespace detbounds {

/// Exact descriptor of factor · base^(exponent/2) · e^(exp_arg) with
/// base ≥ 0. Every bound in the catalogue has this shape; rational values
/// have an even exponent and a zero exp_arg.
struct BoundValue {
    Rational factor = 1;
    Rational base = 1;
    unsigned half_exponent = 0;
    Rational exp_arg = 0;

    static BoundValue rational(const Rational& r) { return BoundValue{r, 1, 0, 0}; }
    /// base^(half_exponent/2)
    static BoundValue half_power(const Rational& base, unsigned half_exponent) {
        return BoundValue{1, base, half_exponent, 0};
    }

    [[nodiscard]] bool is_rational() const { return exact().has_value(); }

    /// Exact value when it is rational.
    [[nodiscard]] std::optional<Rational> exact() const {
        if (factor == 0) return Rational(0);
        if (exp_arg != 0) return std::nullopt;
        if (half_exponent % 2 == 0) return factor * detbounds::pow(base, half_exponent / 2);
        const auto root = rational_sqrt(base);
        if (!root) return std::nullopt;
        return factor * detbounds::pow(*root, half_exponent);
    }

    [[nodiscard]] double to_double() const {
        return detbounds::to_double(factor) * std::pow(detbounds::to_double(base), half_exponent / 2.0) *
               std::exp(detbounds::to_double(exp_arg));
    }

    /// "1/32", "(17/16)^(5/2)", "exp(5/2)*(1/2)^5" and so on.
    [[nodiscard]] std::string to_string() const {
        if (auto e = exact()) return detbounds::to_string(*e);
        std::string s;
        if (exp_arg != 0) s = "exp(" + detbounds::to_string(exp_arg) + ")";
        if (half_exponent != 0 && base != 1) {
            if (!s.empty()) s += "*";
            s += "(" + detbounds::to_string(base) + ")^";
            s += half_exponent % 2 == 0 ? std::to_string(half_exponent / 2) : "(" + std::to_string(half_exponent) + "/2)";
        }
        if (factor != 1) s = detbounds::to_string(factor) + (s.empty() ? "" : "*" + s);
        return s.empty() ? "1" : s;
    }

    static std::optional<Rational> rational_sqrt(const Rational& r) {
        if (r.sign() < 0) return std::nullopt;
        const BigInt p = boost::multiprecision::sqrt(numer(r));
        const BigInt q = boost::multiprecision::sqrt(denom(r));
        if (p * p != numer(r) || q * q != denom(r)) return std::nullopt;
        return Rational(p, q);
    }
};

namespace detail {

/// Rational enclosure [lo, hi] of e^x, x ≥ 0, from the Taylor series with a
/// geometric remainder bound; `terms` controls the precision.
inline std::pair<Rational, Rational> exp_enclosure(const Rational& x, unsigned terms) {
    if (x.sign() < 0) {
        auto [lo, hi] = exp_enclosure(-x, terms);
        return {Rational(1 / hi), Rational(1 / lo)};
    }
    const BigInt ceil_x = floor(x) + 1;
    const unsigned k_min = ceil_x.convert_to<unsigned>() + 2;
    if (terms < k_min) terms = k_min;
    Rational sum = 1;
    Rational term = 1;
    for (unsigned k = 1; k <= terms; ++k) {
        term = term * x / k;
        sum += term;
    }
    // remainder ≤ term·x/(K+1) · 1/(1 − x/(K+2))
    const Rational next = term * x / (terms + 1);
    const Rational ratio = x / (terms + 2);
    return {sum, sum + next / (1 - ratio)};
}

/// Enclosure of sqrt(r) with `bits` fractional bits.
inline std::pair<Rational, Rational> sqrt_enclosure(const Rational& r, unsigned bits) {
    const BigInt scale = BigInt(1) << (2 * bits);
    const BigInt scaled = floor(r * Rational(scale));
    const BigInt s = boost::multiprecision::sqrt(scaled);
    const BigInt unit = BigInt(1) << bits;
    return {Rational(s, unit), Rational(s + 1, unit)};
}

inline std::pair<Rational, Rational> mul_interval(const std::pair<Rational, Rational>& a,
                                                  const std::pair<Rational, Rational>& b) {
    const Rational c[4] = {a.first * b.first, a.first * b.second, a.second * b.first, a.second * b.second};
    return {std::min({c[0], c[1], c[2], c[3]}), std::max({c[0], c[1], c[2], c[3]})};
}

inline std::pair<Rational, Rational> enclose(const BoundValue& v, unsigned level) {
    std::pair<Rational, Rational> acc{v.factor, v.factor};
    const Rational even = detbounds::pow(v.base, v.half_exponent / 2);
    acc = mul_interval(acc, {even, even});
    if (v.half_exponent % 2 == 1) acc = mul_interval(acc, sqrt_enclosure(v.base, 16 * level));
    if (v.exp_arg != 0) acc = mul_interval(acc, exp_enclosure(v.exp_arg, 8 * level));
    return acc;
}

}  // namespace detail

/// Exact three-way comparison of x with a bound value: −1, 0 or +1.
/// Without an exponential factor it squares; otherwise it refines rational
/// enclosures (e^r is irrational for rational r ≠ 0, so this terminates).
inline int compare(const Rational& x, const BoundValue& v) {
    if (v.exp_arg == 0) {
        if (auto e = v.exact()) return x < *e ? -1 : (*e < x ? 1 : 0);
        // v = factor·sqrt(w), w = base^half_exponent > 0, irrational
        const Rational w = detbounds::pow(v.base, v.half_exponent);
        const int sv = v.factor.sign();
        const int sx = x.sign();
        if (sx != sv) return sx < sv ? -1 : 1;
        const Rational x2 = x * x;
        const Rational v2 = v.factor * v.factor * w;
        const int mag = x2 < v2 ? -1 : (v2 < x2 ? 1 : 0);
        return sx > 0 ? mag : -mag;
    }
    if (v.factor == 0 || (v.base == 0 && v.half_exponent > 0)) return x.sign();
    for (unsigned level = 1; level <= 64; level *= 2) {
        const auto [lo, hi] = detail::enclose(v, level);
        if (x < lo) return -1;
        if (x > hi) return 1;
    }
    throw NonConvergent("comparison with an exponential bound did not separate");
}

/// Three-way comparison of two bound values; nullopt when enclosures cannot
/// separate two exponential expressions at the working precision.
inline std::optional<int> compare(const BoundValue& a, const BoundValue& b) {
    if (auto e = a.exact()) return compare(*e, b);
    if (auto e = b.exact()) return -compare(*e, a);
    if (a.exp_arg == 0 && b.exp_arg == 0) {
        const int sa = a.factor.sign();
        const int sb = b.factor.sign();
        if (sa != sb) return sa < sb ? -1 : 1;
        const Rational a2 = a.factor * a.factor * detbounds::pow(a.base, a.half_exponent);
        const Rational b2 = b.factor * b.factor * detbounds::pow(b.base, b.half_exponent);
        const int mag = a2 < b2 ? -1 : (b2 < a2 ? 1 : 0);
        return sa > 0 ? mag : -mag;
    }
    for (unsigned level = 1; level <= 64; level *= 2) {
        const auto ea = detail::enclose(a, level);
        const auto eb = detail::enclose(b, level);
        if (ea.second < eb.first) return -1;
        if (eb.second < ea.first) return 1;
    }
    return std::nullopt;
}

enum class BoundKind { Lower, Upper };

/// The matrix class a bound is proven for, A = I − E.
enum class MatrixClass {
    /// e_ii = 0, |e_ij| ≤ ε
    ZeroDiagonal,
    /// |e_ij| ≤ ε for all i, j
    FullBox,
    /// |e_ij| ≤ ε off the diagonal, e_ii ≤ δ
    OneSidedDiagonal,
};

inline const char* to_string(BoundKind k) { return k == BoundKind::Lower ? "lower" : "upper"; }

inline const char* to_string(MatrixClass c) {
    switch (c) {
        case MatrixClass::ZeroDiagonal: return "diag(E)=0, |e_ij|<=eps";
        case MatrixClass::FullBox: return "|e_ij|<=eps for all i,j";
        case MatrixClass::OneSidedDiagonal: return "|e_ij|<=eps (i!=j), e_ii<=delta";
    }
    return "";
}

struct BoundEntry {
    BoundValue value;
    BoundKind kind = BoundKind::Lower;
    MatrixClass applies_to = MatrixClass::ZeroDiagonal;
    /// The scalar precondition, e.g. "(n-1)eps < 1".
    std::string hypothesis;
    bool valid = true;
    /// Which inequality failed, empty when valid.
    std::string violation;
};

struct BoundTable {
    std::size_t n = 0;
    Rational eps;
    Rational delta;
    std::map<std::string, BoundEntry> entries;

    [[nodiscard]] const BoundEntry& at(const std::string& name) const { return entries.at(name); }
    [[nodiscard]] bool all_valid() const {
        for (const auto& [name, e] : entries)
            if (!e.valid) return false;
        return true;
    }
};

namespace detail {

inline void check_arguments(std::size_t n, const Rational& eps, const Rational& delta) {
    if (n < 1) throw Error("order must be at least 1");
    if (eps.sign() < 0) throw Error("eps must be nonnegative");
    if (delta.sign() < 0) throw Error("delta must be nonnegative");
}

inline void put(BoundTable& t, const std::string& name, BoundValue v, BoundKind kind, MatrixClass cls,
                std::string hypothesis, bool valid) {
    BoundEntry e;
    e.value = std::move(v);
    e.kind = kind;
    e.applies_to = cls;
    e.valid = valid;
    if (!valid) e.violation = "violated: " + hypothesis;
    e.hypothesis = std::move(hypothesis);
    t.entries.emplace(name, std::move(e));
}

}  // namespace detail

/// (1 − δ − (n−1)ε)(1 − δ + ε)^(n−1), the determinant of I − ((δ−ε)I + εJ).
inline Rational toeplitz_lower_bound(std::size_t n, const Rational& eps, const Rational& delta) {
    const long m = static_cast<long>(n) - 1;
    return (1 - delta - m * eps) * detbounds::pow(Rational(1 - delta + eps), static_cast<unsigned>(m));
}

/// Lower bounds on det(I − E).
inline BoundTable lower_bound_table(std::size_t n, const Rational& eps, const Rational& delta = 0) {
    detail::check_arguments(n, eps, delta);
    BoundTable t{n, eps, delta, {}};
    const long m = static_cast<long>(n) - 1;
    const auto un = static_cast<unsigned>(n);
    const Rational me = m * eps;
    const Rational gersh = detbounds::pow(Rational(1 - me), un);
    using K = BoundKind;
    using C = MatrixClass;

    detail::put(t, "gerschgorin_ostrowski", BoundValue::rational(gersh), K::Lower, C::ZeroDiagonal, "(n-1)eps < 1",
                me < 1);
    detail::put(t, "ostrowski_satz6_lower",
                BoundValue::rational(detbounds::pow(Rational(1 - me * me), un / 2)), K::Lower, C::ZeroDiagonal,
                "(n-1)eps < 1", me < 1);
    BoundValue koch = BoundValue::rational(gersh);
    koch.exp_arg = static_cast<long>(n) * me;
    detail::put(t, "von_koch", koch, K::Lower, C::ZeroDiagonal, "(n-1)eps < 1", me < 1);
    detail::put(t, "ostrowski55_lower", BoundValue::rational(1 - static_cast<long>(n) * eps), K::Lower, C::FullBox,
                "n*eps <= 1", static_cast<long>(n) * eps <= 1);
    detail::put(t, "lemma1", BoundValue::rational(toeplitz_lower_bound(n, eps, delta)), K::Lower,
                C::OneSidedDiagonal, "delta + (n-1)eps <= 1", delta + me <= 1);
    detail::put(t, "cor3", BoundValue::rational(toeplitz_lower_bound(n, eps, 0)), K::Lower, C::ZeroDiagonal,
                "(n-1)eps <= 1", me <= 1);
    detail::put(t, "remark2_quadratic", BoundValue::rational(1 - me * me), K::Lower, C::ZeroDiagonal,
                "(n-1)eps <= 1", me <= 1);
    return t;
}

/// Upper bounds on det(I − E).
inline BoundTable upper_bound_table(std::size_t n, const Rational& eps) {
    detail::check_arguments(n, eps, 0);
    BoundTable t{n, eps, 0, {}};
    const long m = static_cast<long>(n) - 1;
    const auto ln = static_cast<long>(n);
    const auto un = static_cast<unsigned>(n);
    const Rational me = m * eps;
    using K = BoundKind;
    using C = MatrixClass;

    detail::put(t, "ostrowski_satz6_upper", BoundValue::rational(detbounds::pow(Rational(1 + me * me), un / 2)),
                K::Upper, C::ZeroDiagonal, "(n-1)eps <= 1", me <= 1);
    const bool o55 = ln * eps < 1;
    detail::put(t, "ostrowski55_upper",
                BoundValue::rational(ln * eps != 1 ? Rational(1 / (1 - ln * eps)) : Rational(0)),
                K::Upper, C::FullBox, "n*eps < 1", o55);
    detail::put(t, "upper1", BoundValue::half_power(1 + 2 * eps + ln * eps * eps, un), K::Upper, C::FullBox,
                "none", true);
    detail::put(t, "upper2", BoundValue::half_power(1 + m * eps * eps, un), K::Upper, C::ZeroDiagonal,
                "none (requires diag(E) = 0)", true);
    return t;
}

/// Both tables merged; δ defaults to 0.
inline BoundTable bound_table(std::size_t n, const Rational& eps, const Rational& delta = 0) {
    BoundTable t = lower_bound_table(n, eps, delta);
    for (auto& [name, e] : upper_bound_table(n, eps).entries) t.entries.emplace(name, std::move(e));
    return t;
}

/// ∏ h_i with h_i = |a_ii| − Σ_{j≠i} |a_ij|; a lower bound on |det A| for
/// strictly diagonally dominant A.
inline Rational ostrowski_product_bound(const RationalMatrix& a) {
    Rational prod = 1;
    for (std::size_t i = 0; i < a.order(); ++i) {
        Rational h = abs(a(i, i));
        for (std::size_t j = 0; j < a.order(); ++j)
            if (j != i) h -= abs(a(i, j));
        if (h.sign() <= 0) {
            throw NotDiagonallyDominant("row " + std::to_string(i) + " has h_i = " + to_string(h) + " <= 0");
        }
        prod *= h;
    }
    return prod;
}

/// (∏|a_ii|)(1 − (n−1)ε)(1 + ε)^(n−1), valid when |a_ij| ≤ ε|a_ii| off the diagonal.
inline Rational scaled_diagonal_lower_bound(const RationalMatrix& a, const Rational& eps) {
    const std::size_t n = a.order();
    Rational prod = 1;
    for (std::size_t i = 0; i < n; ++i) {
        const Rational d = abs(a(i, i));
        for (std::size_t j = 0; j < n; ++j) {
            if (j != i && abs(a(i, j)) > eps * d) {
                throw HypothesisViolated("|a_ij| <= eps|a_ii| fails at (" + std::to_string(i) + ", " +
                                         std::to_string(j) + ")");
            }
        }
        prod *= d;
    }
    return prod * toeplitz_lower_bound(n, eps, 0);
}

struct DominanceGap {
    double lhs = 0.0;
    Rational rhs;
    bool holds = false;
};

/// Compares (1 + 2ε + nε²)^(n/2) against 1/(1 − nε). `holds` is decided
/// exactly: (1 + 2ε + nε²)^n (1 − nε)² < 1.
inline DominanceGap upper_bound_dominance_gap(std::size_t n, const Rational& eps) {
    const auto ln = static_cast<long>(n);
    if (eps.sign() <= 0 || ln * eps >= 1) throw HypothesisViolated("requires eps > 0 and n*eps < 1");
    const Rational base = 1 + 2 * eps + ln * eps * eps;
    DominanceGap g;
    g.rhs = 1 / (1 - ln * eps);
    g.lhs = BoundValue::half_power(base, static_cast<unsigned>(n)).to_double();
    g.holds = detbounds::pow(base, static_cast<unsigned>(n)) * detbounds::pow(Rational(1 - ln * eps), 2) < 1;
    return g;
}

struct AttainableDeterminants {
    /// ((1 + 2ε)^n + 1)/2
    EpsPolynomial inflated;
    /// ((1 + ε)^n + (1 − ε)^n)/2
    EpsPolynomial unit;
};

inline AttainableDeterminants attainable_upper_dets(std::size_t n) {
    const auto un = static_cast<unsigned>(n);
    const EpsPolynomial one = EpsPolynomial::constant(1);
    const EpsPolynomial e = EpsPolynomial::epsilon();
    const Rational half(1, 2);
    return {half * (pow(one + Rational(2) * e, un) + one), half * (pow(one + e, un) + pow(one - e, un))};
}

}  // namespace detbounds
