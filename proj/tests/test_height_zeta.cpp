#include <gtest/gtest.h>

#include "toricdual/height_zeta.hpp"

using namespace toricdual;

namespace {

Matrix mat(std::initializer_list<std::initializer_list<long>> rows) {
    Matrix m;
    for (auto r : rows) m.push_back(vec(r));
    return m;
}

PiecewiseLinearHeight half_line(long slope = 1) { return make_height(1, {mat({{1}})}, mat({{slope}})); }
PiecewiseLinearHeight complete_line() { return make_height(1, {mat({{1}}), mat({{-1}})}, mat({{1}, {-1}})); }
PiecewiseLinearHeight orthant_fan() { return make_height(2, {mat({{1, 0}, {0, 1}})}, mat({{1, 1}})); }

// complete fan of P^2: cones spanned by pairs of e1, e2, -e1-e2
PiecewiseLinearHeight p2_fan() {
    return make_height(2, {mat({{1, 0}, {0, 1}}), mat({{0, 1}, {-1, -1}}), mat({{-1, -1}, {1, 0}})}, mat({{1, 1}, {-2, 1}, {1, -2}}));
}

Series t(long u, Exponents z, const mpq_class& c = 1) { return Series::monomial(1, {0, u, std::move(z)}, c); }

} // namespace

TEST(Height, Exponent) {
    EXPECT_EQ(height_exponent(half_line(), vec({3})), 3);
    EXPECT_EQ(height_exponent(complete_line(), vec({-2})), 2);
    EXPECT_EQ(height_exponent(complete_line(), vec({0})), 0);
    EXPECT_THROW(height_exponent(half_line(), vec({-1})), OutsideSupport);
    EXPECT_EQ(height_exponent(p2_fan(), vec({-1, -1})), 1);
    EXPECT_EQ(height_exponent(p2_fan(), vec({-2, 1})), 5);
}

TEST(Height, Continuity) {
    EXPECT_NO_THROW(make_height(1, {mat({{1}}), mat({{-1}})}, mat({{1}, {-3}}))); // meet in {0}: no condition
    EXPECT_THROW(make_height(2, {mat({{1, 0}, {0, 1}}), mat({{0, 1}, {-1, 0}})}, mat({{1, 1}, {-1, 2}})), InvalidGrading);
    EXPECT_THROW(make_height(2, {mat({{1, 0}, {1, 2}}), mat({{1, 1}, {0, 1}})}, mat({{1, 0}, {1, 0}})), NotAFace);
}

TEST(HeightFourier, LocalExamples) {
    auto chi = CharacterSpec::make_formal(1);
    EXPECT_EQ(height_fourier_local(half_line(), chi, 1, 4), (t(0, {0}) + t(2, {1}) + t(4, {2})).truncated(4));
    EXPECT_EQ(height_fourier_local(complete_line(), chi, 1, 4),
              (t(0, {0}) + t(2, {1}) + t(2, {-1}) + t(4, {2}) + t(4, {-2})).truncated(4));
    EXPECT_THROW(height_fourier_local(half_line(0), chi, 1, 4), PositivityViolation);
}

TEST(HeightFourier, GlobalExamples) {
    auto chi = CharacterSpec::make_formal(1);
    Curve c = Curve::p1(2);
    EXPECT_EQ(height_fourier_global(complete_line(), c, chi, 2), (t(0, {0}) + t(2, {1}, 3) + t(2, {-1}, 3)).truncated(2));
    // the half line is the zeta function at t = z u^2
    Series g = height_fourier_global(half_line(), c, chi, 8);
    Series z = zeta_series(c, 4);
    for (long m = 0; m <= 4; ++m) {
        ZPoly want = ZPoly::term(1, {m}, z.coefficient(m).terms().at({}));
        EXPECT_EQ(g.coefficient(2 * m), want);
        EXPECT_TRUE(g.coefficient(2 * m + 1).is_zero());
    }
    PiecewiseLinearHeight trivial = make_height(2, {Matrix{}}, mat({{0, 0}}));
    EXPECT_EQ(height_fourier_global(trivial, c, CharacterSpec::make_formal(2), 6), Series::one(1, 2).truncated(6));
}

TEST(HeightFourier, CompleteFanAgainstBoxScan) {
    // every lattice point of Z^2 lies in the P^2 fan; scan a box directly
    PiecewiseLinearHeight h = p2_fan();
    MonomialCharacter chi = monomial_character(CharacterSpec::make_formal(2));
    const long U = 8;
    for (long d = 1; d <= 2; ++d) {
        Series want(1, 2, U);
        for (long x = -8; x <= 8; ++x)
            for (long y = -8; y <= 8; ++y) {
                long e = 2 * d * height_exponent(h, vec({x, y})).get_si();
                if (e <= U) want.add_term({0, e, {d * x, d * y}});
            }
        EXPECT_EQ(height_fourier_local(h, chi, d, U), want);
    }
}

TEST(HeightFourier, AntipodalSymmetry) {
    MonomialCharacter chi = monomial_character(CharacterSpec::make_formal(1));
    MonomialCharacter inv = chi.compose(LatticeMap{1, 1, {vec({-1})}});
    for (long d = 1; d <= 3; ++d) EXPECT_EQ(height_fourier_local(complete_line(), chi, d, 8), height_fourier_local(complete_line(), inv, d, 8));
    CharacterSpec root = CharacterSpec::make_specialized(5, {2}, {0});
    MonomialCharacter r = monomial_character(root);
    MonomialCharacter rinv = r.compose(LatticeMap{1, 1, {vec({-1})}});
    EXPECT_EQ(height_fourier_global(complete_line(), Curve::p1(3), r, 6), height_fourier_global(complete_line(), Curve::p1(3), rinv, 6));
}

TEST(HeightBridge, TateAndOrthant) {
    for (const auto& h : {half_line(), orthant_fan(), complete_line(), p2_fan()}) {
        BridgeReport r = verify_height_bridge(h, monomial_character(CharacterSpec::make_formal(h.rank)), 8);
        EXPECT_TRUE(r.ok());
        EXPECT_EQ(r.samples.size(), 3 * (h.cones.size() + 1));
    }
    // single cone: same as the Tate local factor at eta = 2
    GradedToricDatum tate2 = make_datum(mat({{1}}), vec({1}), vec({2}));
    EXPECT_EQ(height_fourier_local(half_line(), CharacterSpec::make_formal(1), 1, 8),
              automorphic_local_factor(tate2, CharacterSpec::make_formal(1), 1, 8));
}
