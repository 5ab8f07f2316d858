#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "detbounds/polynomial.hpp"

namespace detbounds {

inline constexpr int default_isolation_bits = 32;

/// An isolated real root. When exact_root is set the root is that rational and
/// lo = hi = exact_root; otherwise the root is the unique root of `polynomial`
/// in the open interval (lo, hi), the polynomial is squarefree with no
/// rational root there, and its signs at lo and hi are nonzero and opposite.
struct RootBracket {
    EpsPolynomial polynomial;
    Rational lo;
    Rational hi;
    std::optional<Rational> exact_root;

    static RootBracket exact(const Rational& r) {
        return RootBracket{EpsPolynomial::linear_root(r).primitive(), r, r, r};
    }

    [[nodiscard]] bool is_exact() const { return exact_root.has_value(); }
    [[nodiscard]] Rational width() const { return hi - lo; }
    [[nodiscard]] Rational midpoint() const { return is_exact() ? *exact_root : Rational((lo + hi) / 2); }
    [[nodiscard]] double approx() const { return to_double(midpoint()); }
};

/// Positive rescaling keeping signs; makes Sturm remainders smaller.
inline EpsPolynomial positive_normalize(const EpsPolynomial& p) {
    if (p.is_zero()) return p;
    return p * Rational(1 / abs(p.leading()));
}

/// Sturm sequence of a squarefree polynomial.
class SturmChain {
public:
    explicit SturmChain(const EpsPolynomial& p) {
        if (p.is_zero()) throw ZeroPolynomial();
        chain_.push_back(positive_normalize(p));
        if (p.degree() == 0) return;
        chain_.push_back(positive_normalize(p.derivative()));
        while (chain_.back().degree() > 0) {
            auto r = divmod(chain_[chain_.size() - 2], chain_.back()).second;
            if (r.is_zero()) break;
            chain_.push_back(positive_normalize(-r));
        }
    }

    [[nodiscard]] int variations(const Rational& x) const {
        int count = 0;
        int last = 0;
        for (const auto& q : chain_) {
            const int s = q.sign_at(x);
            if (s == 0) continue;
            if (last != 0 && s != last) ++count;
            last = s;
        }
        return count;
    }

    /// Distinct roots in (a, b].
    [[nodiscard]] int count_half_open(const Rational& a, const Rational& b) const {
        return variations(a) - variations(b);
    }

    /// Distinct roots in (a, b).
    [[nodiscard]] int count_open(const Rational& a, const Rational& b) const {
        return count_half_open(a, b) - (chain_.front().sign_at(b) == 0 ? 1 : 0);
    }

    [[nodiscard]] const EpsPolynomial& polynomial() const { return chain_.front(); }

private:
    std::vector<EpsPolynomial> chain_;
};

namespace detail {

/// Divisors of |v| when |v| ≤ 10^12; nullopt otherwise.
inline std::optional<std::vector<std::uint64_t>> small_divisors(const BigInt& v) {
    const BigInt a = v.sign() < 0 ? BigInt(-v) : v;
    if (a > BigInt(1'000'000'000'000ULL) || a == 0) return std::nullopt;
    const auto x = a.convert_to<std::uint64_t>();
    std::vector<std::uint64_t> small;
    std::vector<std::uint64_t> large;
    for (std::uint64_t d = 1; d * d <= x; ++d) {
        if (x % d != 0) continue;
        small.push_back(d);
        if (d * d != x) large.push_back(x / d);
    }
    small.insert(small.end(), large.rbegin(), large.rend());
    return small;
}

/// Homogenised value v^d · p(u/v) for integer coefficients.
inline BigInt homogeneous_value(const std::vector<BigInt>& a, const BigInt& u, const BigInt& v) {
    const std::size_t d = a.size() - 1;
    BigInt acc = a[d];
    BigInt vpow = 1;
    for (std::size_t k = d; k-- > 0;) {
        vpow *= v;
        acc = acc * u + a[k] * vpow;
    }
    return acc;
}

}  // namespace detail

/// Distinct rational roots of p, ascending. Screening uses the rational-root
/// theorem; coefficients beyond 10^12 in the constant or leading position are
/// not screened (their roots are still isolated by bisection).
inline std::vector<Rational> rational_roots(const EpsPolynomial& p) {
    if (p.is_zero()) throw ZeroPolynomial();
    std::vector<Rational> roots;
    std::size_t zeros = 0;
    const EpsPolynomial q = p.strip_epsilon_power(&zeros);
    if (zeros > 0) roots.emplace_back(0);
    if (q.degree() >= 1) {
        const auto a = q.primitive_integer();
        const auto num = detail::small_divisors(a.front());
        const auto den = detail::small_divisors(a.back());
        if (num && den) {
            for (const auto u : *num)
                for (const auto v : *den) {
                    if (boost::multiprecision::gcd(BigInt(u), BigInt(v)) != 1) continue;
                    for (const int s : {1, -1}) {
                        const BigInt uu = s * BigInt(u);
                        if (detail::homogeneous_value(a, uu, BigInt(v)) == 0) roots.emplace_back(uu, BigInt(v));
                    }
                }
        }
    }
    std::sort(roots.begin(), roots.end());
    roots.erase(std::unique(roots.begin(), roots.end()), roots.end());
    return roots;
}

/// Bisects an inexact bracket once. If the midpoint is a root the bracket
/// becomes exact.
inline void bisect(RootBracket& r) {
    if (r.is_exact()) return;
    const Rational mid = (r.lo + r.hi) / 2;
    const int sm = r.polynomial.sign_at(mid);
    if (sm == 0) {
        r = RootBracket::exact(mid);
        return;
    }
    if (sm == r.polynomial.sign_at(r.lo)) {
        r.lo = mid;
    } else {
        r.hi = mid;
    }
}

inline void refine(RootBracket& r, const Rational& width) {
    while (!r.is_exact() && r.width() > width) bisect(r);
}

/// Every real root of p in (lo, hi), ascending. Rational roots are reported
/// exactly; the others are bisected to width ≤ 2^-width_bits.
inline std::vector<RootBracket> isolate_roots(const EpsPolynomial& p, const Rational& lo, const Rational& hi,
                                              int width_bits = default_isolation_bits) {
    if (p.is_zero()) throw ZeroPolynomial();
    if (!(lo < hi)) throw Error("isolate_roots requires lo < hi");
    const Rational width = pow2(-width_bits);

    std::vector<RootBracket> out;
    EpsPolynomial s = squarefree_part(p);
    for (const auto& r : rational_roots(s)) {
        s = divmod(s, EpsPolynomial::linear_root(r)).first;
        if (lo < r && r < hi) out.push_back(RootBracket::exact(r));
    }
    s = s.primitive();

    // Bisection with Sturm counts. A rational root the screening missed shows
    // up as an exact zero at a probe point; it is split off and the scan restarts.
    while (s.degree() >= 1) {
        std::optional<Rational> hit;
        if (s.sign_at(lo) == 0) hit = lo;
        if (s.sign_at(hi) == 0) hit = hi;
        std::vector<RootBracket> found;
        if (!hit) {
            const SturmChain chain(s);
            std::vector<std::pair<Rational, Rational>> work{{lo, hi}};
            while (!work.empty() && !hit) {
                auto [a, b] = work.back();
                work.pop_back();
                const int c = chain.count_open(a, b);
                if (c == 0) continue;
                if (c == 1) {
                    RootBracket r{s, a, b, std::nullopt};
                    refine(r, width);
                    found.push_back(std::move(r));
                    continue;
                }
                const Rational mid = (a + b) / 2;
                if (s.sign_at(mid) == 0) {
                    hit = mid;
                    break;
                }
                work.emplace_back(a, mid);
                work.emplace_back(mid, b);
            }
        }
        if (!hit) {
            out.insert(out.end(), found.begin(), found.end());
            break;
        }
        if (lo < *hit && *hit < hi) out.push_back(RootBracket::exact(*hit));
        s = divmod(s, EpsPolynomial::linear_root(*hit)).first.primitive();
    }
    std::sort(out.begin(), out.end(), [](const RootBracket& x, const RootBracket& y) { return x.midpoint() < y.midpoint(); });
    return out;
}

/// Exact sign of g at the root described by r (r may be refined).
inline int sign_at(const EpsPolynomial& g, RootBracket& r) {
    if (g.is_zero()) return 0;
    if (r.is_exact()) return g.sign_at(*r.exact_root);
    const EpsPolynomial h = gcd(r.polynomial, g);
    if (h.degree() >= 1 && h.sign_at(r.lo) * h.sign_at(r.hi) < 0) return 0;
    const EpsPolynomial gs = squarefree_part(g);
    if (gs.degree() <= 0) return g.sign_at(r.lo);
    const SturmChain chain(gs);
    while (true) {
        if (r.is_exact()) return g.sign_at(*r.exact_root);
        if (gs.sign_at(r.lo) != 0 && gs.sign_at(r.hi) != 0 && chain.count_open(r.lo, r.hi) == 0) {
            return g.sign_at(r.lo);
        }
        bisect(r);
    }
}

namespace detail {

/// Sign of g immediately to one side of the root r (direction +1 right, −1 left).
inline int sign_beside(const EpsPolynomial& g, RootBracket& r, int direction) {
    if (g.is_zero()) return 0;
    if (r.is_exact()) {
        const Rational& x = *r.exact_root;
        EpsPolynomial d = g;
        for (int k = 0; !d.is_zero(); ++k) {
            const int s = d.sign_at(x);
            if (s != 0) return (direction < 0 && (k % 2) == 1) ? -s : s;
            d = d.derivative();
        }
        return 0;
    }
    const int at = sign_at(g, r);
    if (at != 0) return at;
    const EpsPolynomial gs = squarefree_part(g);
    const SturmChain chain(gs);
    while (true) {
        if (r.is_exact()) return sign_beside(g, r, direction);
        if (gs.sign_at(r.lo) != 0 && gs.sign_at(r.hi) != 0 && chain.count_open(r.lo, r.hi) == 1) {
            return g.sign_at(direction > 0 ? r.hi : r.lo);
        }
        bisect(r);
    }
}

}  // namespace detail

inline int sign_right_of(const EpsPolynomial& g, RootBracket& r) { return detail::sign_beside(g, r, +1); }
inline int sign_left_of(const EpsPolynomial& g, RootBracket& r) { return detail::sign_beside(g, r, -1); }

/// Orders two isolated roots exactly: −1, 0 or +1. Brackets may be refined.
inline int compare(RootBracket& a, RootBracket& b) {
    if (a.is_exact() && b.is_exact()) {
        if (*a.exact_root < *b.exact_root) return -1;
        return *b.exact_root < *a.exact_root ? 1 : 0;
    }
    if (b.is_exact() && !a.is_exact()) return -compare(b, a);
    if (a.is_exact()) {
        const Rational x = *a.exact_root;
        while (!b.is_exact()) {
            if (x <= b.lo) return -1;
            if (x >= b.hi) return 1;
            bisect(b);
        }
        return compare(a, b);
    }
    const EpsPolynomial h = gcd(a.polynomial, b.polynomial);
    while (true) {
        if (a.is_exact() || b.is_exact()) return compare(a, b);
        if (a.hi <= b.lo) return -1;
        if (b.hi <= a.lo) return 1;
        const Rational lo = std::max(a.lo, b.lo);
        const Rational hi = std::min(a.hi, b.hi);
        if (h.degree() >= 1 && h.sign_at(lo) * h.sign_at(hi) < 0) return 0;
        bisect(a);
        bisect(b);
    }
}

inline int compare(RootBracket& a, const Rational& x) {
    RootBracket b = RootBracket::exact(x);
    return compare(a, b);
}

}  // namespace detbounds
