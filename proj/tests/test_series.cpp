#include <random>

#include <gtest/gtest.h>

#include "toricdual/series.hpp"

using namespace toricdual;

namespace {

Series mono(long N, long zeta, long u, Exponents z, const mpq_class& c = 1) { return Series::monomial(N, {zeta, u, std::move(z)}, c); }

} // namespace

TEST(Cyclotomic, Polynomials) {
    EXPECT_EQ(cyclotomic_polynomial(1), (std::vector<long>{-1, 1}));
    EXPECT_EQ(cyclotomic_polynomial(4), (std::vector<long>{1, 0, 1}));
    EXPECT_EQ(cyclotomic_polynomial(6), (std::vector<long>{1, -1, 1}));
    EXPECT_EQ(cyclotomic_polynomial(12), (std::vector<long>{1, 0, -1, 0, 1}));
    EXPECT_EQ(euler_phi(15), 8);
}

TEST(Cyclotomic, Relations) {
    EXPECT_EQ(Cyclo::zeta_power(4, 2), Cyclo(4, -1));
    EXPECT_EQ(Cyclo::zeta_power(2, 1), Cyclo(2, -1));
    EXPECT_EQ(Cyclo::zeta_power(3, 3), Cyclo(3, 1));
    EXPECT_EQ(Cyclo::zeta_power(5, -1), Cyclo::zeta_power(5, 4));
    for (long n : {2, 3, 4, 5, 6, 8, 9, 12}) {
        Cyclo sum(n);
        for (long k = 0; k < n; ++k) sum += Cyclo::zeta_power(n, k);
        EXPECT_TRUE(sum.is_zero()) << n;
        for (long j = 0; j < 2 * n; ++j)
            for (long k = 0; k < 2 * n; ++k) EXPECT_EQ(Cyclo::zeta_power(n, j) * Cyclo::zeta_power(n, k), Cyclo::zeta_power(n, j + k));
    }
}

TEST(Cyclotomic, Inverse) {
    Cyclo x = Cyclo::zeta_power(5, 1) + Cyclo(5, 2);
    EXPECT_TRUE((x * x.inverse()).is_one());
}

TEST(Series, ProductTruncates) {
    Series a = mono(1, 0, 0, {}) + mono(1, 0, 1, {});
    a = a.truncated(3);
    Series sq = a * a;
    EXPECT_EQ(sq.order(), 3);
    EXPECT_EQ(sq.coefficient(1), ZPoly::term(1, {}, Cyclo(1, 2)));
    EXPECT_TRUE(sq.coefficient(3).is_zero());
}

TEST(Series, OrderFollowsLowestTerms) {
    Series a = (mono(1, 0, 2, {}) + mono(1, 0, 3, {})).truncated(5);
    Series b = (mono(1, 0, -1, {}) + mono(1, 0, 0, {})).truncated(4);
    EXPECT_EQ((a * b).order(), std::min(5 - 1, 4 + 2));
    Series exact = mono(1, 0, -1, {});
    EXPECT_EQ((a * exact).order(), 4);
}

TEST(Series, PowerMatchesRepeatedProduct) {
    Series a = (mono(1, 0, 0, {0}) + mono(1, 0, 1, {1}) + mono(1, 0, 2, {2}, mpq_class(1, 3))).truncated(6);
    Series p = Series::one(1, 1);
    for (int i = 0; i < 7; ++i) p = p * a;
    EXPECT_EQ(a.pow(7), p);
}

TEST(Series, RandomUnitReciprocals) {
    std::mt19937 rng(3);
    std::uniform_int_distribution<int> c(-3, 3), e(-2, 2);
    for (int trial = 0; trial < 100; ++trial) {
        long N = (trial % 3 == 0) ? 1 : (trial % 3 == 1 ? 3 : 4);
        Series s(N, 1, 8);
        long low = e(rng);
        s.add_term({trial % 5, low, {e(rng)}}, c(rng) == 0 ? 1 : 2);
        for (long k = low + 1; k <= 8; ++k) s.add_term({c(rng), k, {e(rng)}}, c(rng));
        Series inv = s.reciprocal();
        Series prod = s * inv;
        ASSERT_TRUE(prod.agrees_with(Series::one(N, 1))) << s.to_string();
        ASSERT_GE(prod.order(), 8 - low);
    }
}

TEST(Series, SubstitutePower) {
    Series a = (mono(1, 0, 0, {0}) + mono(1, 0, 1, {1})).truncated(4);
    Series b = a.substitute_power(2);
    EXPECT_EQ(b.order(), 8);
    EXPECT_EQ(b.coefficient(2), ZPoly::term(1, {2}, Cyclo(1, 1)));
}

TEST(Series, FirstMismatch) {
    Series a = (mono(2, 0, 0, {}) + mono(2, 1, 3, {})).truncated(5);
    Series b = (mono(2, 0, 0, {}) + mono(2, 0, 3, {})).truncated(5);
    EXPECT_EQ(a.first_mismatch(b), 3);
    EXPECT_EQ(a.first_mismatch(a), Series::kExact);
}
