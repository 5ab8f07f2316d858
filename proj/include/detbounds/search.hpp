#pragma once

#include <algorithm>
#include <array>
#include <atomic>
#include <chrono>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <thread>
#include <unordered_map>
#include <vector>

#include "detbounds/envelope.hpp"
#include "detbounds/sign_pattern.hpp"

namespace detbounds {

inline constexpr std::size_t default_search_max_order = 7;

/// Patterns with an all-plus first row and a first column of k pluses (the
/// diagonal included) followed by minuses, k = 1..n. Index order: k ascending,
/// then the (n−1)(n−2) free signs (rows and columns ≥ 1, row-major) as a
/// binary counter whose bit 0 is the first free position.
class CanonicalPatterns {
public:
    explicit CanonicalPatterns(std::size_t n, std::size_t max_order = default_search_max_order) : n_(n) {
        if (n == 0 || n > max_order || n > PermutationTable::max_order) throw OrderTooLarge(n, max_order);
        for (std::size_t i = 1; i < n; ++i)
            for (std::size_t j = 1; j < n; ++j)
                if (i != j) free_bits_.push_back(std::uint64_t{1} << SignPattern::bit_index(n, i, j));
        for (std::size_t k = 1; k <= n; ++k) {
            std::uint64_t col = 0;
            for (std::size_t i = k; i < n; ++i) col |= std::uint64_t{1} << SignPattern::bit_index(n, i, 0);
            column_masks_.push_back(col);
        }
    }

    [[nodiscard]] std::size_t order() const { return n_; }
    [[nodiscard]] std::size_t free_bit_count() const { return free_bits_.size(); }
    [[nodiscard]] std::uint64_t count() const { return static_cast<std::uint64_t>(n_) << free_bits_.size(); }

    [[nodiscard]] std::uint64_t mask_at(std::uint64_t index) const {
        const std::size_t f = free_bits_.size();
        std::uint64_t mask = column_masks_[static_cast<std::size_t>(index >> f)];
        std::uint64_t counter = index & ((std::uint64_t{1} << f) - 1);
        for (std::size_t t = 0; counter != 0; ++t, counter >>= 1U)
            if (counter & 1U) mask |= free_bits_[t];
        return mask;
    }

    [[nodiscard]] SignPattern at(std::uint64_t index) const { return SignPattern::from_mask(n_, mask_at(index)); }

private:
    std::size_t n_;
    std::vector<std::uint64_t> free_bits_;
    std::vector<std::uint64_t> column_masks_;
};

inline CanonicalPatterns canonical_patterns(std::size_t n, std::size_t max_order = default_search_max_order) {
    return CanonicalPatterns(n, max_order);
}

struct SearchOptions {
    unsigned threads = 1;
    /// Keep every witness per piece; only offered for n ≤ 4.
    bool all_witnesses = false;
    std::size_t max_order = default_search_max_order;
    /// Wall-clock budget; Timeout is thrown once exceeded.
    std::optional<std::chrono::seconds> deadline;
};

struct SearchResult {
    std::size_t n = 0;
    std::uint64_t patterns = 0;
    std::size_t distinct_polynomials = 0;
    Envelope envelope;
    std::vector<std::string> warnings;
};

namespace detail {

using Coefficients = std::array<std::int64_t, PermutationTable::max_order + 1>;

struct CoefficientsHash {
    std::size_t operator()(const Coefficients& c) const {
        std::uint64_t h = 0x9e3779b97f4a7c15ULL;
        for (const auto v : c) {
            h ^= static_cast<std::uint64_t>(v) + 0x9e3779b97f4a7c15ULL + (h << 6U) + (h >> 2U);
        }
        return static_cast<std::size_t>(h);
    }
};

/// Same order as SignPattern::operator< for single-word masks.
inline bool mask_less(std::uint64_t a, std::uint64_t b) {
    const std::uint64_t diff = a ^ b;
    return diff != 0 && (b & diff & (~diff + 1)) != 0;
}

struct Bucket {
    std::uint64_t witness;
    std::vector<std::uint64_t> all;
};

using BucketMap = std::unordered_map<Coefficients, Bucket, CoefficientsHash>;

inline void add(BucketMap& m, const Coefficients& c, std::uint64_t mask, bool keep_all) {
    auto [it, inserted] = m.try_emplace(c, Bucket{mask, {}});
    if (!inserted && mask_less(mask, it->second.witness)) it->second.witness = mask;
    if (keep_all) it->second.all.push_back(mask);
}

inline void merge_into(BucketMap& into, BucketMap& from) {
    for (auto& [c, b] : from) {
        auto [it, inserted] = into.try_emplace(c, std::move(b));
        if (inserted) continue;
        if (mask_less(b.witness, it->second.witness)) it->second.witness = b.witness;
        it->second.all.insert(it->second.all.end(), b.all.begin(), b.all.end());
    }
}

/// Scans mask_of(i) for i in [0, total) across `threads` contiguous chunks.
template <typename MaskOf>
BucketMap scan(std::size_t n, std::uint64_t total, const MaskOf& mask_of, const SearchOptions& opts) {
    const auto& table = permutation_table(n);
    const unsigned threads = std::max(1U, opts.threads);
    const auto start = std::chrono::steady_clock::now();
    std::atomic<bool> expired{false};
    std::atomic<std::uint64_t> scanned{0};
    std::vector<BucketMap> local(threads);

    auto work = [&](unsigned t) {
        const std::uint64_t lo = total * t / threads;
        const std::uint64_t hi = total * (t + 1) / threads;
        for (std::uint64_t i = lo; i < hi; ++i) {
            if (opts.deadline && (i & 0xFFFFU) == 0) {
                if (expired.load() || std::chrono::steady_clock::now() - start > *opts.deadline) {
                    expired = true;
                    scanned += i - lo;
                    return;
                }
            }
            const std::uint64_t mask = mask_of(i);
            add(local[t], unit_det_coefficients(table, mask), mask, opts.all_witnesses);
        }
        scanned += hi - lo;
    };
    if (threads == 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work, t);
        for (auto& th : pool) th.join();
    }
    if (expired) throw Timeout(scanned.load(), total);
    for (unsigned t = 1; t < threads; ++t) merge_into(local[0], local[t]);
    return std::move(local[0]);
}

/// p is dropped when some other polynomial is coefficientwise ≥ p; on ε > 0
/// it can then never be the strict maximum.
inline std::vector<Candidate> prune_dominated(std::vector<Candidate> c) {
    auto dominated_by = [](const EpsPolynomial& p, const EpsPolynomial& q) {
        const std::size_t d = static_cast<std::size_t>(std::max(p.degree(), q.degree()) + 1);
        for (std::size_t k = 0; k < d; ++k)
            if (q.coeff(k) < p.coeff(k)) return false;
        return true;
    };
    std::vector<bool> drop(c.size(), false);
    for (std::size_t i = 0; i < c.size(); ++i)
        for (std::size_t j = 0; j < c.size() && !drop[i]; ++j)
            drop[i] = j != i && !drop[j] && !(c[i].poly == c[j].poly) && dominated_by(c[i].poly, c[j].poly);
    std::vector<Candidate> kept;
    for (std::size_t i = 0; i < c.size(); ++i)
        if (!drop[i]) kept.push_back(std::move(c[i]));
    return kept;
}

inline SearchResult finish(std::size_t n, std::uint64_t total, BucketMap&& buckets, const Rational& hi,
                           const SearchOptions& opts) {
    SearchResult out;
    out.n = n;
    out.patterns = total;
    out.distinct_polynomials = buckets.size();
    std::vector<Candidate> family;
    std::map<EpsPolynomial, std::vector<std::uint64_t>> witnesses;
    for (auto& [c, b] : buckets) {
        const EpsPolynomial poly =
            EpsPolynomial::from_integers(std::vector<std::int64_t>(c.begin(), c.begin() + static_cast<std::ptrdiff_t>(n + 1)));
        family.push_back({poly, SignPattern::from_mask(n, b.witness)});
        if (opts.all_witnesses) witnesses[poly] = std::move(b.all);
    }
    if (hi.sign() <= 0) throw Error("search domain upper end must be positive");
    out.envelope = envelope_of(prune_dominated(std::move(family)), 0, hi);
    if (opts.all_witnesses) {
        for (auto& piece : out.envelope.pieces) {
            auto& masks = witnesses[piece.poly];
            std::sort(masks.begin(), masks.end(), mask_less);
            for (const auto m : masks) piece.all_witnesses.push_back(SignPattern::from_mask(n, m));
        }
    }
    return out;
}

inline void check_search_order(std::size_t n, const SearchOptions& opts, SearchResult& out) {
    if (n == 0 || n > opts.max_order || n > default_search_max_order) throw OrderTooLarge(n, opts.max_order);
    if (opts.all_witnesses && n > 4) throw Error("--all-witnesses is limited to n <= 4");
    if (n == 7) out.warnings.emplace_back("n = 7 scans 7*2^30 patterns of 5040 permutations each; expect a very long run");
}

}  // namespace detail

/// Exact maximal determinant envelope over (0, hi] for unit-diagonal ±ε
/// patterns, scanning only the canonical representatives.
inline SearchResult search_maxdet(std::size_t n, const Rational& hi, const SearchOptions& opts = {}) {
    SearchResult pre;
    detail::check_search_order(n, opts, pre);
    const CanonicalPatterns space(n, opts.max_order);
    auto buckets = detail::scan(n, space.count(), [&](std::uint64_t i) { return space.mask_at(i); }, opts);
    SearchResult out = detail::finish(n, space.count(), std::move(buckets), hi, opts);
    out.warnings = std::move(pre.warnings);
    return out;
}

/// Same envelope from all 2^{n(n−1)} patterns; n ≤ 4.
inline SearchResult search_maxdet_full(std::size_t n, const Rational& hi, const SearchOptions& opts = {}) {
    if (n == 0 || n > 4) throw OrderTooLarge(n, 4);
    const std::uint64_t total = std::uint64_t{1} << (n * (n - 1));
    auto buckets = detail::scan(n, total, [](std::uint64_t i) { return i; }, opts);
    return detail::finish(n, total, std::move(buckets), hi, opts);
}

/// Envelope value at ε = 1; n ≤ 6.
inline BigInt maxdet_at_one(std::size_t n, const SearchOptions& opts = {}) {
    if (n == 0 || n > 6) throw OrderTooLarge(n, 6);
    const Rational v = search_maxdet(n, 2, opts).envelope.value(1);
    if (denom(v) != 1) throw Error("determinant at 1 is not an integer");
    return numer(v);
}

}  // namespace detbounds
