#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"

using namespace detbounds;

namespace {

const Rational eighth(1, 8);

}  // namespace

TEST(LowerBounds, FiveByFiveAtOneEighth) {
    const BoundTable t = lower_bound_table(5, eighth);
    EXPECT_EQ(t.at("gerschgorin_ostrowski").value.exact(), Rational(1, 32));
    EXPECT_EQ(t.at("ostrowski_satz6_lower").value.exact(), Rational(9, 16));
    EXPECT_EQ(t.at("remark2_quadratic").value.exact(), Rational(3, 4));
    EXPECT_EQ(t.at("cor3").value.exact(), Rational(6561, 8192));
    EXPECT_FALSE(t.at("von_koch").value.is_rational());
    EXPECT_NEAR(t.at("von_koch").value.to_double(), std::exp(2.5) / 32, 1e-12);
    EXPECT_NEAR(t.at("von_koch").value.to_double(), 0.3807, 1e-4);
    EXPECT_NEAR(t.at("cor3").value.to_double(), 0.8009, 1e-4);
    EXPECT_TRUE(t.all_valid());
}

TEST(LowerBounds, ZeroPerturbationGivesOne) {
    for (std::size_t n = 1; n <= 7; ++n) {
        const BoundTable t = bound_table(n, 0);
        for (const auto& [name, e] : t.entries) {
            EXPECT_EQ(compare(Rational(1), e.value), 0) << name << " n=" << n;
        }
    }
}

TEST(LowerBounds, DeltaEqualToEpsilon) {
    const BoundTable t = lower_bound_table(5, eighth, eighth);
    EXPECT_EQ(t.at("ostrowski55_lower").value.exact(), Rational(3, 8));
    EXPECT_EQ(t.at("lemma1").value.exact(), Rational(3, 8));
}

TEST(LowerBounds, InvalidEntriesAreFlaggedNotDropped) {
    const BoundTable t = bound_table(5, Rational(1, 2));
    EXPECT_FALSE(t.at("gerschgorin_ostrowski").valid);
    EXPECT_FALSE(t.at("ostrowski55_upper").valid);
    EXPECT_FALSE(t.at("gerschgorin_ostrowski").violation.empty());
    EXPECT_TRUE(t.at("upper1").valid);
    EXPECT_EQ(t.entries.size(), 11U);
    for (const auto& [name, e] : t.entries) EXPECT_FALSE(e.hypothesis.empty()) << name;
}

TEST(UpperBounds, Examples) {
    const BoundTable t = upper_bound_table(5, eighth);
    EXPECT_EQ(t.at("ostrowski_satz6_upper").value.exact(), Rational(25, 16));
    EXPECT_NEAR(t.at("upper2").value.to_double(), 1.16365, 1e-5);
    EXPECT_EQ(t.at("ostrowski55_upper").value.exact(), Rational(8, 3));
    EXPECT_EQ(upper_bound_table(4, 1).at("upper2").value.exact(), Rational(16));
    EXPECT_EQ(t.at("upper2").applies_to, MatrixClass::ZeroDiagonal);
    EXPECT_EQ(t.at("upper1").applies_to, MatrixClass::FullBox);
}

TEST(BoundValueCompare, ExactAgainstIrrational) {
    const BoundValue v = BoundValue::half_power(Rational(17, 16), 5);
    // (17/16)^(5/2) = 1.1636499...
    EXPECT_EQ(compare(Rational(116364, 100000), v), -1);
    EXPECT_EQ(compare(Rational(116365, 100000), v), 1);
    const BoundValue k = lower_bound_table(5, eighth).at("von_koch").value;
    EXPECT_EQ(compare(Rational(38070, 100000), k), -1);
    EXPECT_EQ(compare(Rational(38071, 100000), k), 1);
    EXPECT_EQ(compare(Rational(4), BoundValue::half_power(Rational(4), 2)), 0);
    EXPECT_EQ(compare(BoundValue::rational(Rational(1)), v), -1);
    EXPECT_EQ(compare(v, BoundValue::rational(Rational(1))), 1);
    EXPECT_EQ(compare(BoundValue::rational(Rational(2)), v), 1);
    EXPECT_EQ(compare(k, v), -1);
    EXPECT_EQ(compare(v, k), 1);
}

TEST(BoundTableInvariant, EveryValidLowerBelowEveryValidUpper) {
    for (std::size_t n = 1; n <= 12; ++n)
        for (const Rational& eps : {Rational(0), Rational(1, 64), Rational(1, 16), Rational(1, 8), Rational(1, 2 * n),
                                   Rational(1, n + 1)}) {
            const BoundTable t = bound_table(n, eps);
            for (const auto& [ln, l] : t.entries) {
                if (l.kind != BoundKind::Lower || !l.valid) continue;
                for (const auto& [un, u] : t.entries) {
                    if (u.kind != BoundKind::Upper || !u.valid) continue;
                    const auto c = compare(l.value, u.value);
                    ASSERT_TRUE(c.has_value());
                    EXPECT_LE(*c, 0) << ln << " vs " << un << " n=" << n << " eps=" << to_string(eps);
                }
            }
        }
}

TEST(Dominance, AsStatedInTheCatalogue) {
    for (std::size_t n = 2; n <= 14; ++n)
        for (int k = 1; k <= 40; ++k) {
            const Rational eps = Rational(k, 41 * static_cast<long>(n - 1));
            const BoundTable t = bound_table(n, eps);
            const auto ge = [&](const char* a, const char* b) { return compare(t.at(a).value, t.at(b).value).value() >= 0; };
            if (n > 2) {
                EXPECT_TRUE(ge("cor3", "ostrowski_satz6_lower")) << n << " " << to_string(eps);
                EXPECT_TRUE(ge("ostrowski_satz6_upper", "upper2")) << n << " " << to_string(eps);
            }
            EXPECT_TRUE(ge("von_koch", "gerschgorin_ostrowski")) << n << " " << to_string(eps);
            EXPECT_TRUE(ge("cor3", "remark2_quadratic")) << n << " " << to_string(eps);
        }
}

TEST(OstrowskiProduct, Examples) {
    const RationalMatrix a3 = RationalMatrix::identity(3) - Rational(1, 4) * (RationalMatrix::ones(3) - RationalMatrix::identity(3));
    EXPECT_EQ(ostrowski_product_bound(a3), Rational(1, 8));
    EXPECT_LE(Rational(1, 8), det_rational(a3));
    RationalMatrix d(2);
    d(0, 0) = 2;
    d(1, 1) = 3;
    EXPECT_EQ(ostrowski_product_bound(d), 6);
    const RationalMatrix a5 = RationalMatrix::identity(5) - eighth * (RationalMatrix::ones(5) - RationalMatrix::identity(5));
    EXPECT_EQ(ostrowski_product_bound(a5), Rational(1, 32));
    EXPECT_THROW(ostrowski_product_bound(RationalMatrix::ones(2)), NotDiagonallyDominant);
}

TEST(OstrowskiProduct, NeverExceedsDeterminant) {
    std::uniform_int_distribution<int> k(-100, 100);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 1 + static_cast<std::size_t>(trial % 6);
        RationalMatrix a(n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                a(i, j) = i == j ? Rational(k(oracle::rng()) >= 0 ? 1 : -1) : Rational(k(oracle::rng()), 100 * static_cast<long>(n));
        const Rational h = ostrowski_product_bound(a);
        EXPECT_LE(h, abs(det_rational(a)));
    }
}

TEST(ScaledDiagonal, Examples) {
    const RationalMatrix a5 = RationalMatrix::identity(5) - eighth * (RationalMatrix::ones(5) - RationalMatrix::identity(5));
    EXPECT_EQ(scaled_diagonal_lower_bound(a5, eighth), Rational(6561, 8192));
    RationalMatrix d(3);
    d(0, 0) = 2;
    d(1, 1) = -3;
    d(2, 2) = Rational(1, 2);
    EXPECT_EQ(scaled_diagonal_lower_bound(d, 0), 3);
    // (n−1)ε = 1/2 with unit diagonal: (1/2)(1 + ε)^(n−1) ≥ 3/4.
    for (std::size_t n = 2; n <= 10; ++n) {
        const Rational eps(1, 2 * static_cast<long>(n - 1));
        const RationalMatrix a = RationalMatrix::identity(n) + eps * (RationalMatrix::ones(n) - RationalMatrix::identity(n));
        const Rational b = scaled_diagonal_lower_bound(a, eps);
        EXPECT_GE(b, Rational(3, 4));
        EXPECT_LE(b, abs(det_rational(a)));
    }
    RationalMatrix bad = RationalMatrix::identity(2);
    bad(0, 1) = Rational(1, 2);
    EXPECT_THROW(scaled_diagonal_lower_bound(bad, Rational(1, 4)), HypothesisViolated);
}

TEST(ScaledDiagonal, NeverExceedsDeterminant) {
    std::uniform_int_distribution<int> k(-1000, 1000);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 2 + static_cast<std::size_t>(trial % 5);
        const Rational eps(1, 2 * static_cast<long>(n));
        RationalMatrix a(n);
        for (std::size_t i = 0; i < n; ++i) a(i, i) = Rational(k(oracle::rng()) + 1001, 100);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (i != j) a(i, j) = eps * abs(a(i, i)) * Rational(k(oracle::rng()), 1000);
        EXPECT_LE(scaled_diagonal_lower_bound(a, eps), abs(det_rational(a)));
    }
}

TEST(DominanceGap, Examples) {
    const auto g = upper_bound_dominance_gap(5, eighth);
    EXPECT_NEAR(g.lhs, 2.033, 1e-3);
    EXPECT_EQ(g.rhs, Rational(8, 3));
    EXPECT_TRUE(g.holds);
    const auto g1 = upper_bound_dominance_gap(1, Rational(1, 2));
    // 1 + 2ε + nε² = 9/4 here.
    EXPECT_NEAR(g1.lhs, std::sqrt(1 + 2 * 0.5 + 0.25), 1e-12);
    EXPECT_NEAR(g1.lhs, 1.5, 1e-12);
    EXPECT_EQ(g1.rhs, 2);
    EXPECT_TRUE(g1.holds);
    EXPECT_THROW(upper_bound_dominance_gap(4, Rational(1, 4)), HypothesisViolated);
    EXPECT_THROW(upper_bound_dominance_gap(4, 0), HypothesisViolated);
}

TEST(DominanceGap, HoldsOnAGrid) {
    for (std::size_t n = 1; n <= 20; ++n)
        for (int k = 1; k < 50; ++k) {
            const Rational eps(k, 50 * static_cast<long>(n));
            const auto g = upper_bound_dominance_gap(n, eps);
            EXPECT_TRUE(g.holds) << n << " " << to_string(eps);
            const BoundTable t = upper_bound_table(n, eps);
            EXPECT_EQ(compare(t.at("upper1").value, t.at("ostrowski55_upper").value), -1);
        }
}

TEST(AttainableDets, Examples) {
    EXPECT_EQ(attainable_upper_dets(5).unit, (EpsPolynomial{1, 0, 10, 0, 5}));
    EXPECT_EQ(attainable_upper_dets(6).unit, (EpsPolynomial{1, 0, 15, 0, 15, 0, 1}));
    for (std::size_t n = 1; n <= 8; ++n) {
        const auto a = attainable_upper_dets(n);
        EXPECT_EQ(a.unit(0), 1);
        EXPECT_EQ(a.inflated(0), 1);
    }
}

TEST(AttainableDets, MatchSkewTriangularDeterminants) {
    for (std::size_t n = 1; n <= 10; ++n) {
        const auto a = attainable_upper_dets(n);
        EXPECT_EQ(a.unit, det_poly(skew_tri_pattern(n))) << n;
        EXPECT_EQ(a.unit, skew_tri_det(n, false)) << n;
        EXPECT_EQ(a.inflated, skew_tri_det(n, true)) << n;
    }
}
