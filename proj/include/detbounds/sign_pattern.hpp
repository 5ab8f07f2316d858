#pragma once

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <memory>
#include <mutex>
#include <numeric>
#include <string>
#include <vector>

#include "detbounds/matrix.hpp"

namespace detbounds {

/// Unit-diagonal ±1 pattern. Off-diagonal signs are bit-packed row-major with
/// the diagonal skipped; a set bit means "−".
class SignPattern {
public:
    SignPattern() = default;
    explicit SignPattern(std::size_t n) : n_(n), words_((n * (n - 1) + 63) / 64, 0) {
        if (n == 0) throw Error("sign pattern order must be at least 1");
    }

    /// Builds from a packed mask; requires n·(n−1) ≤ 64.
    static SignPattern from_mask(std::size_t n, std::uint64_t mask) {
        SignPattern p(n);
        if (!p.words_.empty()) p.words_[0] = mask;
        return p;
    }

    /// Rows of '+'/'-' with '.' on the diagonal.
    static SignPattern from_rows(const std::vector<std::string>& rows) {
        const std::size_t n = rows.size();
        SignPattern p(n);
        for (std::size_t i = 0; i < n; ++i) {
            if (rows[i].size() != n) throw ParseError("sign pattern row " + std::to_string(i) + " has wrong length");
            for (std::size_t j = 0; j < n; ++j) {
                const char c = rows[i][j];
                if (i == j) {
                    if (c != '.' && c != '+') throw ParseError("sign pattern diagonal must be '.'");
                    continue;
                }
                if (c != '+' && c != '-') throw ParseError("sign pattern entries must be '+' or '-'");
                p.set_sign(i, j, c == '-' ? -1 : 1);
            }
        }
        return p;
    }

    static SignPattern parse(const std::string& text) {
        std::vector<std::string> rows;
        std::string row;
        for (const char c : text) {
            if (c == '\n' || c == ' ' || c == '/' || c == '\t' || c == '\r') {
                if (!row.empty()) rows.push_back(row);
                row.clear();
            } else {
                row += c;
            }
        }
        if (!row.empty()) rows.push_back(row);
        return from_rows(rows);
    }

    [[nodiscard]] std::size_t order() const { return n_; }
    [[nodiscard]] std::size_t bit_count() const { return n_ * (n_ - 1); }

    static std::size_t bit_index(std::size_t n, std::size_t i, std::size_t j) {
        return i * (n - 1) + (j < i ? j : j - 1);
    }

    [[nodiscard]] int sign(std::size_t i, std::size_t j) const {
        if (i == j) return 1;
        const std::size_t b = bit_index(n_, i, j);
        return ((words_[b / 64] >> (b % 64)) & 1U) != 0 ? -1 : 1;
    }

    void set_sign(std::size_t i, std::size_t j, int s) {
        if (i == j) return;
        const std::size_t b = bit_index(n_, i, j);
        const std::uint64_t bit = std::uint64_t{1} << (b % 64);
        if (s < 0) {
            words_[b / 64] |= bit;
        } else {
            words_[b / 64] &= ~bit;
        }
    }

    /// Packed mask; only meaningful when bit_count() ≤ 64.
    [[nodiscard]] std::uint64_t mask() const { return words_.empty() ? 0 : words_[0]; }

    [[nodiscard]] std::vector<std::string> rows() const {
        std::vector<std::string> r(n_, std::string(n_, '.'));
        for (std::size_t i = 0; i < n_; ++i)
            for (std::size_t j = 0; j < n_; ++j)
                if (i != j) r[i][j] = sign(i, j) < 0 ? '-' : '+';
        return r;
    }

    /// Rows joined by '/', e.g. ".+/-.".
    [[nodiscard]] std::string compact() const {
        std::string s;
        for (const auto& r : rows()) {
            if (!s.empty()) s += '/';
            s += r;
        }
        return s;
    }

    /// Unit diagonal, sign(i,j)·eps elsewhere.
    [[nodiscard]] RationalMatrix instantiate(const Rational& eps) const {
        RationalMatrix m = RationalMatrix::identity(n_);
        for (std::size_t i = 0; i < n_; ++i)
            for (std::size_t j = 0; j < n_; ++j)
                if (i != j) m(i, j) = sign(i, j) * eps;
        return m;
    }

    [[nodiscard]] PolyMatrix symbolic(const std::vector<EpsPolynomial>& diag) const {
        PolyMatrix m(n_);
        for (std::size_t i = 0; i < n_; ++i)
            for (std::size_t j = 0; j < n_; ++j)
                m(i, j) = i == j ? diag[i] : EpsPolynomial::monomial(sign(i, j), 1);
        return m;
    }

    /// Lexicographic on the row-major off-diagonal signs with '+' before '-'.
    friend bool operator<(const SignPattern& a, const SignPattern& b) {
        if (a.n_ != b.n_) return a.n_ < b.n_;
        for (std::size_t w = 0; w < a.words_.size(); ++w) {
            const std::uint64_t diff = a.words_[w] ^ b.words_[w];
            if (diff == 0) continue;
            const std::uint64_t lowest = diff & (~diff + 1);
            return (a.words_[w] & lowest) == 0;
        }
        return false;
    }
    friend bool operator==(const SignPattern& a, const SignPattern& b) { return a.n_ == b.n_ && a.words_ == b.words_; }

private:
    std::size_t n_ = 0;
    std::vector<std::uint64_t> words_;
};

/// All permutations of order n with their sign, their count of non-fixed
/// points, and the packed mask of off-diagonal positions (i, σ(i)) they use.
struct PermutationTable {
    static constexpr std::size_t max_order = 8;

    struct Entry {
        std::uint64_t offdiag_mask;
        std::uint64_t fixed_points;  // bit i set when σ(i) = i
        int sign;
        int moved;
    };

    std::size_t n = 0;
    std::vector<Entry> entries;

    explicit PermutationTable(std::size_t order) : n(order) {
        if (order == 0 || order > max_order) throw OrderTooLarge(order, max_order);
        std::vector<std::size_t> perm(order);
        std::iota(perm.begin(), perm.end(), 0);
        do {
            Entry e{0, 0, 1, 0};
            std::vector<bool> seen(order, false);
            for (std::size_t i = 0; i < order; ++i) {
                if (perm[i] == i) {
                    e.fixed_points |= std::uint64_t{1} << i;
                } else {
                    e.offdiag_mask |= std::uint64_t{1} << SignPattern::bit_index(order, i, perm[i]);
                    ++e.moved;
                }
                if (seen[i]) continue;
                std::size_t len = 0;
                for (std::size_t j = i; !seen[j]; j = perm[j]) {
                    seen[j] = true;
                    ++len;
                }
                if (len % 2 == 0) e.sign = -e.sign;
            }
            entries.push_back(e);
        } while (std::next_permutation(perm.begin(), perm.end()));
    }
};

/// Shared immutable table for order n (built once, thread-safe).
inline const PermutationTable& permutation_table(std::size_t n) {
    static std::array<std::once_flag, PermutationTable::max_order + 1> flags;
    static std::array<std::unique_ptr<PermutationTable>, PermutationTable::max_order + 1> tables;
    if (n == 0 || n > PermutationTable::max_order) throw OrderTooLarge(n, PermutationTable::max_order);
    std::call_once(flags[n], [n] { tables[n] = std::make_unique<PermutationTable>(n); });
    return *tables[n];
}

/// Coefficients of det of the unit-diagonal matrix with entries sign·ε,
/// indexed by power of ε. Integer-only inner loop over the table.
inline std::array<std::int64_t, PermutationTable::max_order + 1> unit_det_coefficients(
    const PermutationTable& table, std::uint64_t negative_mask) {
    std::array<std::int64_t, PermutationTable::max_order + 1> c{};
    for (const auto& e : table.entries) {
        const int parity = std::popcount(e.offdiag_mask & negative_mask) & 1;
        c[static_cast<std::size_t>(e.moved)] += parity != 0 ? -e.sign : e.sign;
    }
    return c;
}

inline std::size_t max_expansion_order() { return 7; }

/// Symbolic determinant of the matrix with diagonal `diag` and off-diagonal
/// entries sign(i,j)·ε. Uses the permutation expansion for n ≤ 7 and exact
/// evaluation/interpolation beyond.
inline EpsPolynomial det_poly(const SignPattern& p, const std::vector<EpsPolynomial>& diag) {
    const std::size_t n = p.order();
    if (diag.size() != n) throw Error("diagonal length does not match the pattern order");
    if (n > max_expansion_order()) return det_symbolic(p.symbolic(diag));

    const bool unit = std::all_of(diag.begin(), diag.end(),
                                  [](const EpsPolynomial& d) { return d == EpsPolynomial::constant(1); });
    const auto& table = permutation_table(n);
    if (unit) {
        const auto c = unit_det_coefficients(table, p.mask());
        return EpsPolynomial::from_integers(std::vector<std::int64_t>(c.begin(), c.begin() + static_cast<std::ptrdiff_t>(n + 1)));
    }
    EpsPolynomial result;
    for (const auto& e : table.entries) {
        const int parity = std::popcount(e.offdiag_mask & p.mask()) & 1;
        EpsPolynomial term = EpsPolynomial::monomial(parity != 0 ? -e.sign : e.sign, static_cast<std::size_t>(e.moved));
        for (std::size_t i = 0; i < n; ++i)
            if ((e.fixed_points >> i) & 1U) term *= diag[i];
        result += term;
    }
    return result;
}

inline EpsPolynomial det_poly(const SignPattern& p) {
    return det_poly(p, std::vector<EpsPolynomial>(p.order(), EpsPolynomial::constant(1)));
}

}  // namespace detbounds
