#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "detbounds/roots.hpp"
#include "detbounds/sign_pattern.hpp"

namespace detbounds {

struct Candidate {
    EpsPolynomial poly;
    SignPattern witness;
};

struct EnvelopePiece {
    EpsPolynomial poly;
    SignPattern witness;
    /// Filled only when the caller asked for every witness.
    std::vector<SignPattern> all_witnesses;
};

/// Upper envelope on (lo, hi]. Piece i covers (breakpoints[i-1], breakpoints[i]],
/// with lo and hi standing in at the ends.
struct Envelope {
    Rational lo;
    Rational hi;
    std::vector<EnvelopePiece> pieces;
    std::vector<RootBracket> breakpoints;

    /// Index of the piece whose half-open interval contains x; requires lo < x ≤ hi.
    [[nodiscard]] std::size_t piece_index(const Rational& x) const {
        if (!(lo < x && x <= hi)) throw Error("point " + detbounds::to_string(x) + " is outside the envelope domain");
        for (std::size_t i = 0; i < breakpoints.size(); ++i) {
            RootBracket b = breakpoints[i];
            if (compare(b, x) >= 0) return i;
        }
        return pieces.size() - 1;
    }

    [[nodiscard]] Rational value(const Rational& x) const { return pieces[piece_index(x)].poly(x); }

    [[nodiscard]] std::vector<EpsPolynomial> polynomials() const {
        std::vector<EpsPolynomial> out;
        for (const auto& p : pieces) out.push_back(p.poly);
        return out;
    }
};

namespace detail {

/// Index of the polynomial that is largest immediately right of x, among `idx`.
/// Ties (identical polynomials) cannot occur after deduplication.
inline std::size_t max_right_of(const std::vector<Candidate>& c, const std::vector<std::size_t>& idx, RootBracket& x) {
    std::size_t best = idx.front();
    for (std::size_t k = 1; k < idx.size(); ++k) {
        if (sign_right_of(c[idx[k]].poly - c[best].poly, x) > 0) best = idx[k];
    }
    return best;
}

/// First root r > x of d in (x, hi) after which d turns positive.
inline std::optional<RootBracket> next_overtake(const EpsPolynomial& d, RootBracket& x, const Rational& hi) {
    // d with no positive coefficient stays ≤ 0 on ε > 0.
    if (x.lo.sign() >= 0) {
        bool any_positive = false;
        for (const auto& c : d.coefficients())
            if (c.sign() > 0) {
                any_positive = true;
                break;
            }
        if (!any_positive) return std::nullopt;
    }
    const Rational from = x.is_exact() ? *x.exact_root : x.lo;
    if (!(from < hi)) return std::nullopt;
    for (auto& r : isolate_roots(d, from, hi)) {
        if (compare(r, x) <= 0) continue;
        if (sign_right_of(d, r) > 0) return r;
    }
    return std::nullopt;
}

}  // namespace detail

/// Removes duplicate polynomials, keeping the smallest witness. When
/// `witnesses` is given it collects every witness per polynomial.
inline std::vector<Candidate> dedupe(const std::vector<Candidate>& in,
                                     std::map<EpsPolynomial, std::vector<SignPattern>>* witnesses = nullptr) {
    std::map<EpsPolynomial, SignPattern> best;
    for (const auto& c : in) {
        auto [it, inserted] = best.emplace(c.poly, c.witness);
        if (!inserted && c.witness < it->second) it->second = c.witness;
        if (witnesses) (*witnesses)[c.poly].push_back(c.witness);
    }
    std::vector<Candidate> out;
    out.reserve(best.size());
    for (auto& [p, w] : best) out.push_back({p, w});
    return out;
}

/// Exact upper envelope of the candidates on (lo, hi]. Sweeps left to right:
/// the next breakpoint is the earliest point where some polynomial overtakes
/// the current maximum, found by isolating roots of the differences.
inline Envelope envelope_of(const std::vector<Candidate>& candidates, const Rational& lo, const Rational& hi) {
    if (candidates.empty()) throw Error("envelope of an empty family");
    if (!(lo < hi)) throw Error("envelope domain requires lo < hi");
    const std::vector<Candidate> c = dedupe(candidates);

    std::vector<std::size_t> all(c.size());
    for (std::size_t i = 0; i < c.size(); ++i) all[i] = i;

    Envelope env{lo, hi, {}, {}};
    RootBracket x = RootBracket::exact(lo);
    std::size_t cur = detail::max_right_of(c, all, x);
    while (true) {
        std::optional<RootBracket> next;
        std::vector<std::size_t> crossing;
        for (std::size_t q = 0; q < c.size(); ++q) {
            if (q == cur) continue;
            auto r = detail::next_overtake(c[q].poly - c[cur].poly, x, hi);
            if (!r) continue;
            const int cmp = next ? compare(*r, *next) : -1;
            if (cmp < 0) {
                next = std::move(r);
                crossing.assign(1, q);
            } else if (cmp == 0) {
                crossing.push_back(q);
            }
        }
        env.pieces.push_back({c[cur].poly, c[cur].witness, {}});
        if (!next) break;
        const std::size_t winner = detail::max_right_of(c, crossing, *next);
        // Record the breakpoint against the difference of the two adjacent pieces.
        const EpsPolynomial d = c[winner].poly - c[cur].poly;
        RootBracket bp = *next;
        if (!bp.is_exact()) {
            const Rational from = x.is_exact() ? *x.exact_root : x.lo;
            for (auto& r : isolate_roots(d, from, hi)) {
                if (compare(r, bp) == 0) {
                    if (!r.is_exact()) bp = r;
                    break;
                }
            }
        }
        env.breakpoints.push_back(bp);
        x = bp;
        cur = winner;
    }
    return env;
}

namespace detail {

/// A rational strictly between two ordered, distinct points.
inline Rational rational_between(RootBracket a, RootBracket b) {
    while (true) {
        const Rational ah = a.is_exact() ? *a.exact_root : a.hi;
        const Rational bl = b.is_exact() ? *b.exact_root : b.lo;
        if (ah < bl) return (ah + bl) / 2;
        // An inexact bracket's root lies strictly inside it.
        if (ah == bl && !a.is_exact() && !b.is_exact()) return ah;
        if (a.is_exact() && b.is_exact()) throw Error("rational_between needs distinct points");
        bisect(a);
        bisect(b);
    }
}

}  // namespace detail

/// Checks that every piece dominates q on its interval: q − piece has no
/// positive value at the right end or at one rational sample per region
/// between consecutive roots.
inline bool piece_dominates(const Envelope& env, std::size_t i, const EpsPolynomial& q) {
    const EpsPolynomial d = q - env.pieces[i].poly;
    if (d.is_zero()) return true;
    RootBracket a = i == 0 ? RootBracket::exact(env.lo) : env.breakpoints[i - 1];
    RootBracket b = i + 1 == env.pieces.size() ? RootBracket::exact(env.hi) : env.breakpoints[i];
    if (sign_at(d, b) > 0) return false;
    const Rational from = a.is_exact() ? *a.exact_root : a.lo;
    const Rational to = b.is_exact() ? *b.exact_root : b.hi;
    std::vector<RootBracket> pts{a};
    for (auto& r : isolate_roots(d, from, to)) {
        if (compare(r, a) > 0 && compare(r, b) < 0) pts.push_back(r);
    }
    pts.push_back(b);
    for (std::size_t k = 0; k + 1 < pts.size(); ++k) {
        if (d.sign_at(detail::rational_between(pts[k], pts[k + 1])) > 0) return false;
    }
    return true;
}

inline bool envelope_dominates(const Envelope& env, const std::vector<Candidate>& family) {
    for (std::size_t i = 0; i < env.pieces.size(); ++i)
        for (const auto& c : family)
            if (!piece_dominates(env, i, c.poly)) return false;
    return true;
}

}  // namespace detbounds
