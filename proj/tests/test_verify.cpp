#include <gtest/gtest.h>

#include "oracles.hpp"

using namespace detbounds;

TEST(SplitMix, Deterministic) {
    SplitMix64 a(42);
    SplitMix64 b(42);
    for (int i = 0; i < 100; ++i) EXPECT_EQ(a.next(), b.next());
    // Reference output of the standard SplitMix64 for seed 0.
    SplitMix64 z(0);
    EXPECT_EQ(z.next(), 0xe220a8397b1dcdafULL);
    EXPECT_EQ(z.next(), 0x6e789e6aa1b965f4ULL);
}

TEST(SplitMix, UniformStaysInRangeAndHitsEnds) {
    SplitMix64 r(7);
    bool lo = false;
    bool hi = false;
    for (int i = 0; i < 5000; ++i) {
        const auto v = r.uniform(-3, 3);
        ASSERT_GE(v, -3);
        ASSERT_LE(v, 3);
        lo = lo || v == -3;
        hi = hi || v == 3;
    }
    EXPECT_TRUE(lo && hi);
}

TEST(SampleGrid, DyadicAndInRange) {
    SplitMix64 r(1);
    const Rational eps(1, 8);
    for (int i = 0; i < 1000; ++i) {
        const Rational x = sample_grid(r, -eps, eps);
        ASSERT_LE(abs(x), eps);
        ASSERT_EQ(denom(x * 65536), 1);
    }
}

TEST(Sandwich, Examples) {
    const auto rep = sandwich_test(5, Rational(1, 8), 0, true, 500, default_seed);
    EXPECT_TRUE(rep.passed());
    EXPECT_EQ(rep.trials, 500U);
    EXPECT_TRUE(rep.failures.empty());
    EXPECT_TRUE(rep.violated_hypotheses.empty());

    const auto one_sided = sandwich_test(4, Rational(1, 8), Rational(1, 8), false, 500, 99);
    EXPECT_TRUE(one_sided.passed());

    EXPECT_THROW(sandwich_test(3, Rational(1, 8), 0, true, 0, 1), Error);
}

TEST(Sandwich, LowerLegSkippedOutsideHypothesis) {
    const auto rep = sandwich_test(4, Rational(1, 2), 0, true, 200, 5);
    EXPECT_FALSE(rep.violated_hypotheses.empty());
    EXPECT_TRUE(rep.passed());
}

TEST(Sandwich, CornerMatrixAttainsLowerBound) {
    for (std::size_t n = 2; n <= 8; ++n) {
        const Rational eps(1, 2 * static_cast<long>(n));
        const RationalMatrix e = eps * (RationalMatrix::ones(n) - RationalMatrix::identity(n));
        const Rational det = oracle::det(RationalMatrix::identity(n) - e);
        const BoundTable t = lower_bound_table(n, eps);
        EXPECT_EQ(compare(det, t.at("cor3").value), 0) << n;
    }
}

TEST(Sandwich, ReproducibleUnderSeed) {
    const auto a = sandwich_test(4, Rational(1, 16), 0, false, 50, 1234);
    const auto b = sandwich_test(4, Rational(1, 16), 0, false, 50, 1234);
    EXPECT_EQ(a.trials, b.trials);
    EXPECT_EQ(a.status, b.status);
    EXPECT_EQ(a.notes, b.notes);
    ASSERT_TRUE(a.seed.has_value());
    EXPECT_EQ(*a.seed, 1234U);
}

TEST(Majorant, Examples) {
    const RationalMatrix third = Rational(1, 3) * RationalMatrix::ones(3);
    EXPECT_TRUE(majorant_test(third, 300, default_seed).passed());
    EXPECT_TRUE(majorant_test(toeplitz_F(4, Rational(1, 8), Rational(1, 8)), 300, default_seed).passed());

    const auto twice = majorant_test(2 * RationalMatrix::identity(3), 10, default_seed);
    EXPECT_EQ(twice.status, ReportStatus::Inapplicable);
    EXPECT_FALSE(twice.passed());

    RationalMatrix negative = RationalMatrix::identity(2);
    negative(0, 1) = -1;
    EXPECT_EQ(majorant_test(negative, 10, default_seed).status, ReportStatus::Inapplicable);
}

TEST(Majorant, RandomNonnegativeMatricesWithSmallRowSums) {
    std::uniform_int_distribution<int> k(0, 100);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t n = 2 + static_cast<std::size_t>(trial % 4);
        RationalMatrix f(n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) f(i, j) = Rational(k(oracle::rng()), 100 * static_cast<long>(n));
        const auto rep = majorant_test(f, 100, static_cast<std::uint64_t>(trial));
        EXPECT_TRUE(rep.passed()) << format_matrix(f);
    }
}

TEST(RhoCounterexample, Examples) {
    for (const std::size_t n : {2U, 4U}) {
        const auto rep = remark1_counterexample(n);
        EXPECT_TRUE(rep.passed()) << n;
        EXPECT_EQ(rep.trials, 1U);
    }
    EXPECT_EQ(remark1_counterexample(2, 1).status, ReportStatus::Fail);
    // Odd n with phi = 2 gives det(I − F) = −1 < 0 = det(I − E).
    EXPECT_EQ(remark1_counterexample(3).status, ReportStatus::Fail);
    EXPECT_EQ(certify_rho_le_one(2 * RationalMatrix::identity(2)).rho_le_one, false);
}

TEST(Sharpness, Examples) {
    EXPECT_TRUE(sharpness_check(5, Rational(1, 8), 0).passed());
    EXPECT_EQ(sharpness_check(5, Rational(1, 8), 0).notes.front(), "det = 6561/8192");
    EXPECT_EQ(sharpness_check(5, Rational(1, 5), Rational(1, 5)).notes.front(), "det = 0");
    EXPECT_EQ(sharpness_check(1, Rational(1, 3), Rational(1, 4)).notes.front(), "det = 3/4");
    EXPECT_THROW(sharpness_check(5, Rational(1, 4), Rational(1, 2)), HypothesisViolated);
}

TEST(Sharpness, RandomAgainstLeibniz) {
    std::uniform_int_distribution<int> k(0, 64);
    for (int trial = 0; trial < 30; ++trial) {
        const std::size_t n = 1 + static_cast<std::size_t>(trial % 7);
        const auto m = static_cast<long>(n) - 1;
        const Rational eps(k(oracle::rng()), 64 * (m + 1));
        const Rational delta = (1 - m * eps) * Rational(k(oracle::rng()), 64);
        ASSERT_TRUE(sharpness_check(n, eps, delta).passed());
        const Rational det = oracle::det(RationalMatrix::identity(n) - toeplitz_F(n, delta, eps));
        EXPECT_EQ(det, toeplitz_lower_bound(n, eps, delta));
    }
}

TEST(SkewHadamardIdentity, ConverseOnConstructedOrders) {
    for (const std::size_t n : {1U, 2U, 4U, 8U, 12U, 16U}) {
        const auto rep = skew_hadamard_converse(skew_hadamard(n));
        EXPECT_TRUE(rep.passed()) << n;
        EXPECT_EQ(rep.trials, 2U);
    }
}

TEST(SkewHadamardIdentity, ForwardAcceptsSkewHadamard) {
    for (const std::size_t n : {2U, 4U, 8U}) {
        const auto rep = skew_hadamard_forward(skew_hadamard(n).rational());
        EXPECT_TRUE(rep.passed()) << n;
        EXPECT_EQ(rep.trials, 5U);
    }
}

TEST(SkewHadamardIdentity, ForwardRejectsNonSkewMatrices) {
    const RationalMatrix m = 2 * RationalMatrix::identity(4) - RationalMatrix::ones(4);
    // Entries lie in [−1, 1] but the identity fails.
    const auto rep = skew_hadamard_forward(m);
    EXPECT_EQ(rep.status, ReportStatus::Fail);
    EXPECT_FALSE(rep.failures.empty());
    EXPECT_EQ(rep.failures.front().digest, "identity");

    EXPECT_EQ(skew_hadamard_forward(2 * RationalMatrix::identity(4)).status, ReportStatus::Inapplicable);
    EXPECT_EQ(skew_hadamard_check(m, Direction::Converse).status, ReportStatus::Inapplicable);
    EXPECT_THROW(skew_hadamard_forward(RationalMatrix::identity(3)), NotPolynomial);
}

TEST(Reports, PassImpliesTrialsAndNoFailures) {
    std::vector<VerificationReport> reports{
        sandwich_test(3, Rational(1, 8), 0, true, 20, 3), remark1_counterexample(2), sharpness_check(3, Rational(1, 4), 0),
        skew_hadamard_converse(skew_hadamard(4)), majorant_test(Rational(1, 4) * RationalMatrix::ones(2), 20, 3)};
    for (const auto& r : reports) {
        if (!r.passed()) continue;
        EXPECT_GT(r.trials, 0U) << r.claim;
        EXPECT_TRUE(r.failures.empty()) << r.claim;
    }
}

TEST(Digest, StableAndDistinct) {
    EXPECT_EQ(matrix_digest(RationalMatrix::identity(2)), matrix_digest(RationalMatrix::identity(2)));
    EXPECT_NE(matrix_digest(RationalMatrix::identity(2)), matrix_digest(RationalMatrix::identity(3)));
    EXPECT_EQ(matrix_digest(RationalMatrix::identity(2)).size(), 16U);
}
