#pragma once

#include <cassert>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "detbounds/bounds.hpp"
#include "detbounds/matrix.hpp"
#include "detbounds/sign_pattern.hpp"

namespace detbounds {

/// F = (δ − ε)I + εJ: δ on the diagonal, ε elsewhere.
inline RationalMatrix toeplitz_F(std::size_t n, const Rational& delta, const Rational& eps) {
    RationalMatrix f(n, eps);
    for (std::size_t i = 0; i < n; ++i) f(i, i) = delta;
#ifndef NDEBUG
    assert(det_rational(RationalMatrix::identity(n) - f) == toeplitz_lower_bound(n, eps, delta));
#endif
    return f;
}

/// '+' above the diagonal, '-' below: the pattern of I + ε(U − Uᵀ).
inline SignPattern skew_tri_pattern(std::size_t n) {
    SignPattern p(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < i; ++j) p.set_sign(i, j, -1);
    return p;
}

/// I + ε(U − Uᵀ), or (1 + ε)I + ε(U − Uᵀ) when `inflate`.
inline RationalMatrix skew_tri(std::size_t n, const Rational& eps, bool inflate) {
    RationalMatrix m = skew_tri_pattern(n).instantiate(eps);
    if (inflate)
        for (std::size_t i = 0; i < n; ++i) m(i, i) += eps;
    return m;
}

inline EpsPolynomial skew_tri_det(std::size_t n, bool inflate) {
    const EpsPolynomial d = inflate ? EpsPolynomial{1, 1} : EpsPolynomial{1};
    return det_poly(skew_tri_pattern(n), std::vector<EpsPolynomial>(n, d));
}

/// True iff M has ±1 entries, M + Mᵀ = 2I and M·Mᵀ = nI.
template <typename T>
bool verify_skew_hadamard(const DenseMatrix<T>& m) {
    const std::size_t n = m.order();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            if (m(i, j) != T(1) && m(i, j) != T(-1)) return false;
            const T expected = i == j ? T(2) : T(0);
            if (m(i, j) + m(j, i) != expected) return false;
        }
    const DenseMatrix<T> g = m * m.transpose();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (g(i, j) != (i == j ? T(static_cast<long>(n)) : T(0))) return false;
    return true;
}

/// A ±1 matrix with H + Hᵀ = 2I and H·Hᵀ = nI. Instances only exist after
/// both identities have been checked exactly.
class SkewHadamard {
public:
    static SkewHadamard verified(DenseMatrix<int> m, std::string derivation) {
        if (!verify_skew_hadamard(m)) throw Error("matrix from '" + derivation + "' is not skew-Hadamard");
        return SkewHadamard(std::move(m), std::move(derivation));
    }

    [[nodiscard]] std::size_t order() const { return m_.order(); }
    [[nodiscard]] const DenseMatrix<int>& matrix() const { return m_; }
    [[nodiscard]] RationalMatrix rational() const {
        return m_.map([](int v) { return Rational(v); });
    }
    /// e.g. "paley(7)" or "double(paley(3))".
    [[nodiscard]] const std::string& derivation() const { return derivation_; }

    /// Rows as strings of '+'/'-'.
    [[nodiscard]] std::vector<std::string> compact_rows() const {
        std::vector<std::string> rows(order(), std::string(order(), '+'));
        for (std::size_t i = 0; i < order(); ++i)
            for (std::size_t j = 0; j < order(); ++j)
                if (m_(i, j) < 0) rows[i][j] = '-';
        return rows;
    }

private:
    SkewHadamard(DenseMatrix<int> m, std::string d) : m_(std::move(m)), derivation_(std::move(d)) {}

    DenseMatrix<int> m_;
    std::string derivation_;
};

namespace detail {

inline bool is_prime(std::size_t q) {
    if (q < 2) return false;
    for (std::size_t d = 2; d * d <= q; ++d)
        if (q % d == 0) return false;
    return true;
}

/// Quadratic character modulo the prime q.
inline int legendre(std::size_t a, std::size_t q) {
    a %= q;
    if (a == 0) return 0;
    std::size_t r = 1;
    std::size_t b = a;
    for (std::size_t e = (q - 1) / 2; e != 0; e >>= 1U) {
        if (e & 1U) r = r * b % q;
        b = b * b % q;
    }
    return r == 1 ? 1 : -1;
}

/// Paley I over GF(q), q ≡ 3 (mod 4) prime: H = I + [[0, eᵀ], [−e, Q]] with
/// Jacobsthal Q_ij = χ(j − i).
inline DenseMatrix<int> paley_skew(std::size_t q) {
    const std::size_t n = q + 1;
    DenseMatrix<int> h(n, 0);
    for (std::size_t j = 1; j < n; ++j) {
        h(0, j) = 1;
        h(j, 0) = -1;
    }
    for (std::size_t i = 0; i < q; ++i)
        for (std::size_t j = 0; j < q; ++j) h(i + 1, j + 1) = legendre(j + q - i, q);
    for (std::size_t i = 0; i < n; ++i) h(i, i) = 1;
    return h;
}

/// [[H, H], [−Hᵀ, Hᵀ]]
inline DenseMatrix<int> double_skew(const DenseMatrix<int>& h) {
    const std::size_t m = h.order();
    DenseMatrix<int> d(2 * m, 0);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) {
            d(i, j) = h(i, j);
            d(i, j + m) = h(i, j);
            d(i + m, j) = -h(j, i);
            d(i + m, j + m) = h(j, i);
        }
    return d;
}

inline std::optional<std::pair<DenseMatrix<int>, std::string>> try_skew(std::size_t n) {
    if (n == 1) return std::make_pair(DenseMatrix<int>(1, 1), std::string("base(1)"));
    if (n == 2) {
        DenseMatrix<int> h(2, 1);
        h(1, 0) = -1;
        return std::make_pair(std::move(h), std::string("base(2)"));
    }
    if (n % 4 != 0) return std::nullopt;
    if (is_prime(n - 1)) return std::make_pair(paley_skew(n - 1), "paley(" + std::to_string(n - 1) + ")");
    if (auto half = try_skew(n / 2)) {
        return std::make_pair(double_skew(half->first), "double(" + half->second + ")");
    }
    return std::nullopt;
}

}  // namespace detail

/// Skew-Hadamard matrix of order n from base cases, Paley I over prime fields,
/// or doubling, tried in that order.
inline SkewHadamard skew_hadamard(std::size_t n) {
    if (n == 0 || (n > 2 && n % 4 != 0)) {
        throw InvalidOrder("skew-Hadamard order must be 1, 2 or a multiple of 4, got " + std::to_string(n));
    }
    auto built = detail::try_skew(n);
    if (!built) {
        throw Unconstructible("no construction for order " + std::to_string(n) +
                              " (tried: base, paley over a prime field, doubling)");
    }
    return SkewHadamard::verified(std::move(built->first), std::move(built->second));
}

inline bool is_constructible_skew_order(std::size_t n) {
    if (n == 0 || (n > 2 && n % 4 != 0)) return false;
    return detail::try_skew(n).has_value();
}

/// (1 − ε)I + εH
inline RationalMatrix perturb_identity(const SkewHadamard& h, const Rational& eps) {
    const std::size_t n = h.order();
    RationalMatrix a(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) a(i, j) = (i == j ? 1 - eps : Rational(0)) + eps * h.matrix()(i, j);
    return a;
}

/// (1 − ε)I + εM with ε symbolic, for any rational M.
inline PolyMatrix perturb_identity_symbolic(const RationalMatrix& m) {
    const std::size_t n = m.order();
    PolyMatrix a(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            a(i, j) = EpsPolynomial::monomial(m(i, j), 1);
            if (i == j) a(i, j) += EpsPolynomial{1, -1};
        }
    return a;
}

inline PolyMatrix perturb_identity_symbolic(const SkewHadamard& h) { return perturb_identity_symbolic(h.rational()); }

/// (1 + (n−1)ε²)^(n/2) expanded; n must be even or 1.
inline EpsPolynomial sharp_upper_polynomial(std::size_t n) {
    if (n != 1 && n % 2 != 0) throw NotPolynomial("(1 + (n-1)e^2)^(n/2) is not a polynomial for odd n > 1");
    const EpsPolynomial base{1, 0, Rational(static_cast<long>(n) - 1)};
    if (n == 1) return EpsPolynomial{1};
    return pow(base, static_cast<unsigned>(n / 2));
}

}  // namespace detbounds
