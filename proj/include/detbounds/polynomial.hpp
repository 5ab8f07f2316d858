#pragma once

#include <algorithm>
#include <cstddef>
#include <initializer_list>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "detbounds/rational.hpp"

namespace detbounds {

/// Univariate polynomial in the perturbation parameter, exact rational
/// coefficients stored lowest degree first. Trailing zeros are never stored,
/// so the zero polynomial has no coefficients and degree -1.
class EpsPolynomial {
public:
    EpsPolynomial() = default;
    explicit EpsPolynomial(const Rational& c) {
        if (c != 0) coeffs_.push_back(c);
    }
    EpsPolynomial(std::initializer_list<Rational> coeffs) : coeffs_(coeffs) { trim(); }
    explicit EpsPolynomial(std::vector<Rational> coeffs) : coeffs_(std::move(coeffs)) { trim(); }

    template <typename Int>
    static EpsPolynomial from_integers(const std::vector<Int>& coeffs) {
        std::vector<Rational> c;
        c.reserve(coeffs.size());
        for (const auto& v : coeffs) c.emplace_back(v);
        return EpsPolynomial(std::move(c));
    }

    static EpsPolynomial constant(const Rational& c) { return EpsPolynomial(c); }
    static EpsPolynomial monomial(const Rational& c, std::size_t degree) {
        std::vector<Rational> v(degree + 1);
        v[degree] = c;
        return EpsPolynomial(std::move(v));
    }
    /// The polynomial ε.
    static EpsPolynomial epsilon() { return monomial(1, 1); }
    /// ε − r.
    static EpsPolynomial linear_root(const Rational& r) { return EpsPolynomial(std::vector<Rational>{-r, Rational(1)}); }

    [[nodiscard]] int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
    [[nodiscard]] bool is_zero() const { return coeffs_.empty(); }
    [[nodiscard]] const std::vector<Rational>& coefficients() const { return coeffs_; }
    [[nodiscard]] Rational coeff(std::size_t k) const { return k < coeffs_.size() ? coeffs_[k] : Rational(0); }
    [[nodiscard]] const Rational& leading() const { return coeffs_.back(); }

    [[nodiscard]] Rational operator()(const Rational& x) const {
        Rational acc = 0;
        for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + *it;
        return acc;
    }

    [[nodiscard]] double evaluate_double(double x) const {
        double acc = 0.0;
        for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + to_double(*it);
        return acc;
    }

    /// Sign of the value at x, computed exactly.
    [[nodiscard]] int sign_at(const Rational& x) const { return (*this)(x).sign(); }

    [[nodiscard]] EpsPolynomial derivative() const {
        if (coeffs_.size() <= 1) return {};
        std::vector<Rational> d(coeffs_.size() - 1);
        for (std::size_t k = 1; k < coeffs_.size(); ++k) d[k - 1] = coeffs_[k] * static_cast<long>(k);
        return EpsPolynomial(std::move(d));
    }

    /// Divides by the leading coefficient; zero stays zero.
    [[nodiscard]] EpsPolynomial monic() const {
        if (is_zero()) return {};
        EpsPolynomial r = *this;
        const Rational lc = leading();
        for (auto& c : r.coeffs_) c /= lc;
        return r;
    }

    /// Integer coefficients with unit content and positive leading coefficient.
    [[nodiscard]] std::vector<BigInt> primitive_integer() const {
        if (is_zero()) return {};
        BigInt den = 1;
        for (const auto& c : coeffs_) den = lcm(den, denom(c));
        std::vector<BigInt> v;
        v.reserve(coeffs_.size());
        BigInt g = 0;
        for (const auto& c : coeffs_) {
            v.push_back(numer(c) * (den / denom(c)));
            g = gcd(g, v.back());
        }
        if (v.back().sign() < 0) g = -g;
        for (auto& c : v) c /= g;
        return v;
    }

    [[nodiscard]] EpsPolynomial primitive() const { return from_integers(primitive_integer()); }

    /// Removes the factor ε^k of highest possible k.
    [[nodiscard]] EpsPolynomial strip_epsilon_power(std::size_t* removed = nullptr) const {
        std::size_t k = 0;
        while (k < coeffs_.size() && coeffs_[k] == 0) ++k;
        if (removed != nullptr) *removed = k;
        return EpsPolynomial(std::vector<Rational>(coeffs_.begin() + static_cast<std::ptrdiff_t>(k), coeffs_.end()));
    }

    EpsPolynomial& operator+=(const EpsPolynomial& o) {
        if (o.coeffs_.size() > coeffs_.size()) coeffs_.resize(o.coeffs_.size());
        for (std::size_t k = 0; k < o.coeffs_.size(); ++k) coeffs_[k] += o.coeffs_[k];
        trim();
        return *this;
    }
    EpsPolynomial& operator-=(const EpsPolynomial& o) {
        if (o.coeffs_.size() > coeffs_.size()) coeffs_.resize(o.coeffs_.size());
        for (std::size_t k = 0; k < o.coeffs_.size(); ++k) coeffs_[k] -= o.coeffs_[k];
        trim();
        return *this;
    }
    EpsPolynomial& operator*=(const Rational& s) {
        if (s == 0) {
            coeffs_.clear();
            return *this;
        }
        for (auto& c : coeffs_) c *= s;
        return *this;
    }

    friend EpsPolynomial operator+(EpsPolynomial a, const EpsPolynomial& b) { return a += b; }
    friend EpsPolynomial operator-(EpsPolynomial a, const EpsPolynomial& b) { return a -= b; }
    friend EpsPolynomial operator-(EpsPolynomial a) {
        for (auto& c : a.coeffs_) c = -c;
        return a;
    }
    friend EpsPolynomial operator*(EpsPolynomial a, const Rational& s) { return a *= s; }
    friend EpsPolynomial operator*(const Rational& s, EpsPolynomial a) { return a *= s; }
    friend EpsPolynomial operator*(const EpsPolynomial& a, const EpsPolynomial& b) {
        if (a.is_zero() || b.is_zero()) return {};
        std::vector<Rational> r(a.coeffs_.size() + b.coeffs_.size() - 1);
        for (std::size_t i = 0; i < a.coeffs_.size(); ++i) {
            if (a.coeffs_[i] == 0) continue;
            for (std::size_t j = 0; j < b.coeffs_.size(); ++j) r[i + j] += a.coeffs_[i] * b.coeffs_[j];
        }
        return EpsPolynomial(std::move(r));
    }
    EpsPolynomial& operator*=(const EpsPolynomial& o) { return *this = *this * o; }

    friend bool operator==(const EpsPolynomial& a, const EpsPolynomial& b) { return a.coeffs_ == b.coeffs_; }

    /// Coefficientwise lexicographic order, lowest degree first. Used only to
    /// make containers deterministic.
    friend bool operator<(const EpsPolynomial& a, const EpsPolynomial& b) {
        const std::size_t n = std::max(a.coeffs_.size(), b.coeffs_.size());
        for (std::size_t k = 0; k < n; ++k) {
            const Rational x = a.coeff(k);
            const Rational y = b.coeff(k);
            if (x != y) return x < y;
        }
        return false;
    }

    /// "[1, 0, 10, 0, 21]"; non-integer coefficients print as p/q.
    [[nodiscard]] std::string to_string() const {
        std::string s = "[";
        if (coeffs_.empty()) s += "0";
        for (std::size_t k = 0; k < coeffs_.size(); ++k) {
            if (k != 0) s += ", ";
            s += detbounds::to_string(coeffs_[k]);
        }
        return s + "]";
    }

    /// Human-readable form, e.g. "1 + 10e^2 + 21e^4".
    [[nodiscard]] std::string pretty(std::string_view var = "e") const {
        if (coeffs_.empty()) return "0";
        std::string s;
        for (std::size_t k = 0; k < coeffs_.size(); ++k) {
            const Rational& c = coeffs_[k];
            if (c == 0) continue;
            const bool neg = c.sign() < 0;
            if (s.empty()) {
                if (neg) s += "-";
            } else {
                s += neg ? " - " : " + ";
            }
            const Rational a = detbounds::abs(c);
            if (k == 0 || a != 1) s += detbounds::to_string(a);
            if (k >= 1) {
                s += var;
                if (k >= 2) s += "^" + std::to_string(k);
            }
        }
        return s;
    }

private:
    void trim() {
        while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
    }

    std::vector<Rational> coeffs_;
};

inline EpsPolynomial pow(const EpsPolynomial& p, unsigned k) {
    EpsPolynomial r = EpsPolynomial::constant(1);
    EpsPolynomial b = p;
    while (k != 0) {
        if (k & 1U) r *= b;
        k >>= 1U;
        if (k != 0) b *= b;
    }
    return r;
}

/// Euclidean division a = q·b + r with deg r < deg b.
inline std::pair<EpsPolynomial, EpsPolynomial> divmod(const EpsPolynomial& a, const EpsPolynomial& b) {
    if (b.is_zero()) throw ZeroPolynomial();
    std::vector<Rational> rem = a.coefficients();
    const auto& bc = b.coefficients();
    const std::size_t db = bc.size() - 1;
    if (rem.size() < bc.size()) return {EpsPolynomial{}, a};
    std::vector<Rational> quot(rem.size() - db);
    for (std::size_t k = rem.size(); k-- > db;) {
        const Rational f = rem[k] / bc[db];
        quot[k - db] = f;
        if (f == 0) continue;
        for (std::size_t j = 0; j <= db; ++j) rem[k - db + j] -= f * bc[j];
    }
    rem.resize(db);
    return {EpsPolynomial(std::move(quot)), EpsPolynomial(std::move(rem))};
}

/// Monic greatest common divisor; gcd(0, 0) = 0.
inline EpsPolynomial gcd(EpsPolynomial a, EpsPolynomial b) {
    while (!b.is_zero()) {
        auto r = divmod(a, b).second;
        a = std::move(b);
        b = r.is_zero() ? EpsPolynomial{} : r.primitive();
    }
    return a.monic();
}

/// p / gcd(p, p'): same roots, all simple.
inline EpsPolynomial squarefree_part(const EpsPolynomial& p) {
    if (p.degree() <= 0) return p;
    const EpsPolynomial g = gcd(p, p.derivative());
    return divmod(p, g).first;
}

/// Parses "[c0, c1, ...]" with integer or p/q entries.
inline EpsPolynomial parse_polynomial(std::string_view text) {
    const auto open = text.find('[');
    const auto close = text.rfind(']');
    if (open == std::string_view::npos || close == std::string_view::npos || close < open) {
        throw ParseError("polynomial must be written as [c0, c1, ...]");
    }
    std::vector<Rational> coeffs;
    std::string_view body = text.substr(open + 1, close - open - 1);
    if (body.find_first_not_of(" \t") == std::string_view::npos) return {};
    while (true) {
        const auto comma = body.find(',');
        coeffs.push_back(parse_rational(body.substr(0, comma)));
        if (comma == std::string_view::npos) break;
        body = body.substr(comma + 1);
    }
    return EpsPolynomial(std::move(coeffs));
}

}  // namespace detbounds
