#include <random>

#include <gtest/gtest.h>

#include "toricdual/function_field.hpp"

using namespace toricdual;

namespace {

// Number of monic irreducible polynomials of degree d over F_p, by sieving
// out all products of lower-degree monic polynomials.
long brute_irreducible_count(long p, long d) {
    auto encode = [p](const std::vector<long>& c) {
        long x = 0;
        for (std::size_t i = c.size(); i-- > 0;) x = x * p + c[i];
        return x;
    };
    auto monics = [p](long deg) {
        std::vector<std::vector<long>> out;
        long total = 1;
        for (long i = 0; i < deg; ++i) total *= p;
        for (long x = 0; x < total; ++x) {
            std::vector<long> c(deg + 1);
            long y = x;
            for (long i = 0; i < deg; ++i) {
                c[i] = y % p;
                y /= p;
            }
            c[deg] = 1;
            out.push_back(c);
        }
        return out;
    };
    std::set<long> reducible;
    for (long a = 1; a < d; ++a)
        for (const auto& f : monics(a))
            for (const auto& g : monics(d - a)) {
                std::vector<long> h(d + 1, 0);
                for (std::size_t i = 0; i < f.size(); ++i)
                    for (std::size_t j = 0; j < g.size(); ++j) h[i + j] = (h[i + j] + f[i] * g[j]) % p;
                reducible.insert(encode(h));
            }
    return static_cast<long>(monics(d).size() - reducible.size());
}

} // namespace

TEST(Places, ExamplesAndBruteForce) {
    Curve c2 = Curve::p1(2), c3 = Curve::p1(3);
    EXPECT_EQ(place_counts(c2, 4).counts, (std::vector<Int>{3, 1, 2, 3}));
    EXPECT_EQ(place_counts(c3, 3).counts, (std::vector<Int>{4, 3, 8}));
    EXPECT_EQ(place_counts(Curve::p1(7), 1).counts, (std::vector<Int>{8}));
    for (long p : {2L, 3L}) {
        PlaceTable t = place_counts(Curve::p1(p), p == 2 ? 8 : 5);
        for (long d = 1; d <= t.cutoff(); ++d) EXPECT_EQ(t[d], brute_irreducible_count(p, d) + (d == 1 ? 1 : 0)) << p << " " << d;
    }
}

TEST(Places, MobiusConsistency) {
    for (long q : {2L, 3L, 4L, 5L, 7L, 8L, 9L}) {
        Curve c = Curve::p1(q);
        PlaceTable t = place_counts(c, 12);
        for (long n = 1; n <= 12; ++n) {
            Int s = 0;
            for (long d = 1; d <= n; ++d)
                if (n % d == 0) s += d * t[d];
            EXPECT_EQ(s, c.point_count(n));
        }
    }
}

TEST(Curve, Validation) {
    EXPECT_THROW(Curve::p1(6), DimensionMismatch);
    Curve bad{2, 0, {{"inf", 1, -2}}};
    EXPECT_THROW(bad.validate(), DimensionMismatch);
    Curve moved{2, 0, {{"x", 1, -1}}};
    EXPECT_NO_THROW(moved.validate());
}

TEST(Zeta, ClosedForm) {
    for (long q : {2L, 3L, 4L, 5L}) {
        Series z = zeta_series(Curve::p1(q), 12);
        for (long m = 0; m <= 12; ++m) {
            // coefficient of t^m in 1/((1-t)(1-qt)) is sum_{j<=m} q^j
            Int want = 0, qj = 1;
            for (long j = 0; j <= m; ++j, qj *= q) want += qj;
            EXPECT_EQ(z.coefficient(m), ZPoly::term(1, {}, Cyclo(1, mpq_class(want)))) << q << " " << m;
        }
    }
    EXPECT_EQ(zeta_series(Curve::p1(2), 3).coefficient(3), ZPoly::term(1, {}, Cyclo(1, 15)));
    EXPECT_EQ(zeta_series(Curve::p1(3), 2).coefficient(2), ZPoly::term(1, {}, Cyclo(1, 13)));
    EXPECT_TRUE(zeta_series(Curve::p1(3), 0).agrees_with(Series::one(1, 0)));
}

TEST(Characters, Monomials) {
    EXPECT_EQ(character_monomial(CharacterSpec::make_formal(1), vec({2}), 3), (Monomial{0, 0, {6}}));
    Monomial m = character_monomial(CharacterSpec::make_specialized(4, {1}, {0}), vec({1}), 2);
    EXPECT_EQ(Series::monomial(4, m), Series::monomial(4, {0, 0, {0}}, -1));
    EXPECT_EQ(character_monomial(CharacterSpec::make_specialized(1, {0}, {-1}), vec({1}), 1), (Monomial{0, -1, {0}}));
}

TEST(Characters, Multiplicative) {
    std::mt19937 rng(9);
    std::uniform_int_distribution<int> e(-4, 4), flag(0, 2);
    for (int trial = 0; trial < 200; ++trial) {
        CharacterSpec chi{"", 6, {}};
        for (int i = 0; i < 3; ++i) {
            if (flag(rng) == 0) chi.coords.push_back({});
            else chi.coords.push_back({false, mod_floor(e(rng), 6), e(rng)});
        }
        Vec a = vec({e(rng), e(rng), e(rng)}), b = vec({e(rng), e(rng), e(rng)});
        long d = 1 + trial % 4;
        Monomial ab = character_monomial(chi, a + b, d);
        Monomial prod = character_monomial(chi, a, d) * character_monomial(chi, b, d);
        ASSERT_EQ(Series::monomial(6, ab), Series::monomial(6, prod));
    }
}

TEST(Prefactors, TateAndQuadric) {
    Curve c = Curve::p1(2);
    GradedDualPair tate = toric_dual(make_datum({vec({1})}, vec({1}), vec({1})));
    Prefactors p = normalization_prefactors(tate, c, CharacterSpec::make_formal(1));
    EXPECT_EQ(p.automorphic, Series::monomial(1, {0, 0, {1}}));
    EXPECT_EQ(p.spectral, Series::monomial(1, {0, 0, {1}}));
    EXPECT_EQ(p.duality_exponent, 0);

    GradedDualPair quad = toric_dual(make_datum({vec({1, 0}), vec({1, 2})}, vec({1, 1}), vec({1, 1})));
    EXPECT_EQ(normalization_prefactors(quad, c, CharacterSpec::make_formal(2)).duality_exponent, 0);
    GradedDualPair quad21 = toric_dual(make_datum({vec({1, 0}), vec({1, 2})}, vec({1, 1}), vec({2, 1})));
    Prefactors p21 = normalization_prefactors(quad21, c, CharacterSpec::make_formal(2));
    EXPECT_EQ(p21.duality_exponent, -1);
    EXPECT_EQ(p21.spectral, Series::monomial(1, {0, 1, {1, 1}}));
}

TEST(Prefactors, RationalGradingNeedsDivisibleExponents) {
    Curve c = Curve::p1(3);
    MonomialCharacter chi = monomial_character(CharacterSpec::make_formal(1));
    EXPECT_THROW(half_canonical_value(c, chi, vec({1}), 2), BranchAmbiguity);
    MonomialCharacter sq = chi.compose(LatticeMap{1, 1, {vec({2})}});
    EXPECT_EQ(half_canonical_value(c, sq, vec({1}), 2), (Monomial{0, 0, {1}}));
}
