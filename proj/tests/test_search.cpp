#include <gtest/gtest.h>

#include <set>

#include "oracles.hpp"

using namespace detbounds;

namespace {

bool is_canonical(const SignPattern& p) {
    const std::size_t n = p.order();
    for (std::size_t j = 1; j < n; ++j)
        if (p.sign(0, j) != 1) return false;
    bool seen_minus = false;
    for (std::size_t i = 1; i < n; ++i) {
        if (p.sign(i, 0) < 0) seen_minus = true;
        if (seen_minus && p.sign(i, 0) > 0) return false;
    }
    return true;
}

std::vector<EpsPolynomial> polys(const Envelope& e) { return e.polynomials(); }

/// Max over the family at x, by direct evaluation.
Rational brute_max(const std::vector<Candidate>& family, const Rational& x) {
    Rational best = family.front().poly(x);
    for (const auto& c : family) best = std::max(best, c.poly(x));
    return best;
}

}  // namespace

TEST(CanonicalPatterns, Counts) {
    EXPECT_EQ(canonical_patterns(1).count(), 1U);
    EXPECT_EQ(canonical_patterns(2).count(), 2U);
    EXPECT_EQ(canonical_patterns(5).count(), 20480U);
    for (std::size_t n = 1; n <= 7; ++n)
        EXPECT_EQ(canonical_patterns(n).count(), n << ((n - 1) * (n - 2)));
    EXPECT_THROW(canonical_patterns(8), OrderTooLarge);
    EXPECT_THROW(canonical_patterns(7, 6), OrderTooLarge);
}

TEST(CanonicalPatterns, AllDistinctAndCanonicalInOrder) {
    for (std::size_t n = 1; n <= 4; ++n) {
        const auto space = canonical_patterns(n);
        std::set<std::uint64_t> seen;
        for (std::uint64_t i = 0; i < space.count(); ++i) {
            const SignPattern p = space.at(i);
            EXPECT_TRUE(is_canonical(p)) << p.compact();
            seen.insert(p.mask());
        }
        EXPECT_EQ(seen.size(), space.count());
    }
    // k ascending: the first block has every first-column entry below the diagonal '-'.
    const auto s4 = canonical_patterns(4);
    EXPECT_EQ(s4.at(0).compact(), ".+++/-.++/-+.+/-++.");
    EXPECT_EQ(s4.at(s4.count() - 1).compact(), ".+++/+.--/+-.-/+--.");
}

TEST(EnvelopeOf, Examples) {
    const std::vector<Candidate> three{{EpsPolynomial{1, 0, 3}, SignPattern(3)}, {EpsPolynomial{1, 0, 1, 2}, SignPattern(3)}};
    const Envelope e = envelope_of(three, 0, 2);
    ASSERT_EQ(e.pieces.size(), 2U);
    ASSERT_TRUE(e.breakpoints[0].is_exact());
    EXPECT_EQ(*e.breakpoints[0].exact_root, 1);

    const Envelope single = envelope_of({{EpsPolynomial{1, 0, 1}, SignPattern(2)}}, 0, 2);
    EXPECT_EQ(single.pieces.size(), 1U);
    EXPECT_TRUE(single.breakpoints.empty());

    const std::vector<Candidate> six{{EpsPolynomial{1, 0, 15, 0, 63, 0, 81}, SignPattern(6)},
                                     {EpsPolynomial{1, 0, 3, 32, 63, 48, 13}, SignPattern(6)}};
    const Envelope e6 = envelope_of(six, 0, 1);
    ASSERT_EQ(e6.breakpoints.size(), 1U);
    EXPECT_FALSE(e6.breakpoints[0].is_exact());
    EXPECT_EQ(e6.breakpoints[0].polynomial, (EpsPolynomial{-3, 5, 5, 17}));
    EXPECT_NEAR(e6.breakpoints[0].approx(), 0.3437, 5e-5);
    EXPECT_THROW(envelope_of({}, 0, 1), Error);
}

TEST(EnvelopeOf, TiesKeepSmallestWitness) {
    const SignPattern a = SignPattern::parse(".+/-.");
    const SignPattern b = SignPattern::parse(".-/+.");
    const Envelope e = envelope_of({{EpsPolynomial{1, 0, 1}, b}, {EpsPolynomial{1, 0, 1}, a}}, 0, 2);
    ASSERT_EQ(e.pieces.size(), 1U);
    EXPECT_EQ(e.pieces[0].witness, a);
}

TEST(EnvelopeOf, MatchesBruteForceMaximum) {
    std::uniform_int_distribution<int> k(-6, 6);
    for (int trial = 0; trial < 40; ++trial) {
        std::vector<Candidate> family;
        for (int i = 0; i < 6; ++i) {
            EpsPolynomial p{1, k(oracle::rng()), k(oracle::rng()), k(oracle::rng()), k(oracle::rng())};
            family.push_back({p, SignPattern(2)});
        }
        const Envelope e = envelope_of(family, 0, 3);
        EXPECT_TRUE(envelope_dominates(e, family));
        for (std::size_t i = 1; i < e.pieces.size(); ++i) EXPECT_FALSE(e.pieces[i].poly == e.pieces[i - 1].poly);
        // Adjacent pieces meet at each breakpoint.
        for (std::size_t i = 0; i + 1 < e.pieces.size(); ++i) {
            RootBracket b = e.breakpoints[i];
            EXPECT_EQ(sign_at(e.pieces[i + 1].poly - e.pieces[i].poly, b), 0);
        }
        for (int s = 1; s <= 90; ++s) {
            const Rational x(s, 30);
            EXPECT_EQ(e.value(x), brute_max(family, x)) << to_string(x);
        }
    }
}

TEST(Search, SmallOrdersMatchTheCatalogue) {
    EXPECT_EQ(polys(search_maxdet(1, 2).envelope), (std::vector<EpsPolynomial>{{1}}));
    EXPECT_EQ(polys(search_maxdet(2, 2).envelope), (std::vector<EpsPolynomial>{{1, 0, 1}}));
    const auto r3 = search_maxdet(3, 2);
    EXPECT_EQ(polys(r3.envelope), (std::vector<EpsPolynomial>{{1, 0, 3}, {1, 0, 1, 2}}));
    EXPECT_EQ(*r3.envelope.breakpoints.at(0).exact_root, 1);
    EXPECT_EQ(polys(search_maxdet(4, 2).envelope), (std::vector<EpsPolynomial>{{1, 0, 6, 0, 9}}));
}

TEST(Search, OrderFive) {
    const auto r = search_maxdet(5, 2);
    EXPECT_EQ(r.patterns, 20480U);
    EXPECT_EQ(polys(r.envelope), (std::vector<EpsPolynomial>{
                                     {1, 0, 10, 0, 21}, {1, 0, 8, 6, 15, 18}, {1, 0, 2, 16, 21, 8}, {1, 0, 0, 10, 15, 22}}));
    ASSERT_EQ(r.envelope.breakpoints.size(), 3U);
    const std::vector<Rational> expected{Rational(1, 3), Rational(3, 5), Rational(1)};
    for (std::size_t i = 0; i < 3; ++i) {
        ASSERT_TRUE(r.envelope.breakpoints[i].is_exact());
        EXPECT_EQ(*r.envelope.breakpoints[i].exact_root, expected[i]);
    }
    EXPECT_EQ(r.envelope.piece_index(Rational(1, 3)), 0U);
    EXPECT_EQ(r.envelope.piece_index(Rational(1, 2)), 1U);
    EXPECT_EQ(r.envelope.piece_index(Rational(2)), 3U);
}

TEST(Search, WitnessesAreCanonicalAndReproduceTheirPolynomial) {
    for (std::size_t n = 1; n <= 5; ++n) {
        const auto r = search_maxdet(n, 2);
        for (const auto& p : r.envelope.pieces) {
            EXPECT_TRUE(is_canonical(p.witness)) << p.witness.compact();
            EXPECT_EQ(oracle::pattern_det(p.witness), p.poly);
        }
    }
}

TEST(Search, LeadingCoefficientOfLastPiece) {
    const std::vector<long> expected{1, 2, 9, 22};
    for (std::size_t n = 2; n <= 5; ++n) {
        const auto r = search_maxdet(n, 2);
        EXPECT_EQ(r.envelope.pieces.back().poly.degree(), static_cast<int>(n));
        EXPECT_EQ(r.envelope.pieces.back().poly.leading(), expected[n - 2]) << n;
    }
}

TEST(Search, DominatesRandomPatternsAtPieceMidpoints) {
    for (std::size_t n = 2; n <= 5; ++n) {
        const auto r = search_maxdet(n, 2);
        const Envelope& e = r.envelope;
        for (std::size_t i = 0; i < e.pieces.size(); ++i) {
            const Rational a = i == 0 ? e.lo : e.breakpoints[i - 1].midpoint();
            const Rational b = i + 1 == e.pieces.size() ? e.hi : e.breakpoints[i].midpoint();
            const Rational mid = (a + b) / 2;
            for (int t = 0; t < 1000; ++t) {
                const SignPattern p = oracle::random_pattern(n);
                ASSERT_GE(e.pieces[i].poly(mid), det_rational(p.instantiate(mid))) << p.compact();
            }
        }
    }
}

TEST(Search, SymmetryReductionIsExhaustive) {
    for (std::size_t n = 2; n <= 4; ++n) {
        const auto canon = search_maxdet(n, 2);
        const auto full = search_maxdet_full(n, 2);
        EXPECT_EQ(polys(canon.envelope), polys(full.envelope)) << n;
        ASSERT_EQ(canon.envelope.breakpoints.size(), full.envelope.breakpoints.size());
        for (std::size_t i = 0; i < canon.envelope.breakpoints.size(); ++i) {
            RootBracket a = canon.envelope.breakpoints[i];
            RootBracket b = full.envelope.breakpoints[i];
            EXPECT_EQ(compare(a, b), 0);
        }
    }
}

TEST(Search, DeterministicAcrossThreadCounts) {
    const auto one = search_maxdet(5, 2);
    for (const unsigned threads : {2U, 3U, 7U}) {
        SearchOptions opts;
        opts.threads = threads;
        const auto many = search_maxdet(5, 2, opts);
        ASSERT_EQ(many.envelope.pieces.size(), one.envelope.pieces.size());
        EXPECT_EQ(many.distinct_polynomials, one.distinct_polynomials);
        for (std::size_t i = 0; i < one.envelope.pieces.size(); ++i) {
            EXPECT_EQ(many.envelope.pieces[i].poly, one.envelope.pieces[i].poly);
            EXPECT_EQ(many.envelope.pieces[i].witness, one.envelope.pieces[i].witness);
        }
    }
}

TEST(Search, AllWitnesses) {
    SearchOptions opts;
    opts.all_witnesses = true;
    const auto r = search_maxdet(3, 2, opts);
    for (const auto& p : r.envelope.pieces) {
        ASSERT_FALSE(p.all_witnesses.empty());
        EXPECT_EQ(p.all_witnesses.front(), p.witness);
        for (const auto& w : p.all_witnesses) EXPECT_EQ(det_poly(w), p.poly);
        EXPECT_TRUE(std::is_sorted(p.all_witnesses.begin(), p.all_witnesses.end()));
    }
    EXPECT_THROW(search_maxdet(5, 2, opts), Error);
}

TEST(Search, UpperBoundConsistency) {
    // Pieces stay below (1 + (n−1)ε²)^(n/2); equality throughout only for n = 1, 2, 4.
    for (std::size_t n = 1; n <= 5; ++n) {
        const auto r = search_maxdet(n, 2);
        bool always_equal = true;
        for (int s = 1; s <= 40; ++s) {
            const Rational x(s, 20);
            const Rational v = r.envelope.value(x);
            const BoundValue ub = BoundValue::half_power(1 + Rational(static_cast<long>(n) - 1) * x * x, static_cast<unsigned>(n));
            const int c = compare(v, ub);
            EXPECT_LE(c, 0) << n << " " << to_string(x);
            if (c != 0) always_equal = false;
        }
        EXPECT_EQ(always_equal, n == 1 || n == 2 || n == 4) << n;
    }
}

TEST(Search, MaxdetAtOne) {
    EXPECT_EQ(maxdet_at_one(3), 4);
    EXPECT_EQ(maxdet_at_one(4), 16);
    EXPECT_EQ(maxdet_at_one(5), 48);
    EXPECT_THROW(maxdet_at_one(7), OrderTooLarge);
}

TEST(Search, Errors) {
    EXPECT_THROW(search_maxdet(8, 2), OrderTooLarge);
    EXPECT_THROW(search_maxdet(0, 2), OrderTooLarge);
    EXPECT_THROW(search_maxdet(3, 0), Error);
    EXPECT_THROW(search_maxdet_full(5, 2), OrderTooLarge);
    SearchOptions opts;
    opts.max_order = 5;
    EXPECT_THROW(search_maxdet(6, 2, opts), OrderTooLarge);
    opts.max_order = 7;
    opts.deadline = std::chrono::seconds(0);
    EXPECT_THROW(search_maxdet(6, 2, opts), Timeout);
}
