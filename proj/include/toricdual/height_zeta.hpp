#pragma once

// Piecewise-linear heights on fans over P^1 and the Euler product of their
// Fourier transforms. With q_v^{-phi} = u^{2 deg(v) phi}, a single cone with
// slope s gives the automorphic local factor of eta = 2 s.

#include <set>
#include <vector>

#include "period_engines.hpp"

namespace toricdual {

struct PiecewiseLinearHeight {
    std::size_t rank = 0;
    std::vector<Cone> cones; // maximal cones of the fan
    Matrix slopes;           // one covector per cone
};

inline Cone intersect_cones(const Cone& a, const Cone& b) {
    Matrix ineqs = a.facets;
    for (const auto& f : b.facets) ineqs.push_back(f);
    for (const auto* c : {&a, &b})
        for (const auto& e : c->equations) {
            ineqs.push_back(e);
            ineqs.push_back(-e);
        }
    return dual_cone(make_cone_general(ineqs, a.ambient_rank));
}

inline PiecewiseLinearHeight make_height(std::size_t rank, const std::vector<Matrix>& cone_rays, const Matrix& slopes) {
    if (cone_rays.size() != slopes.size()) throw DimensionMismatch("one slope per cone is required");
    PiecewiseLinearHeight h{rank, {}, slopes};
    for (const auto& s : slopes)
        if (s.size() != rank) throw DimensionMismatch("slope has the wrong rank");
    for (const auto& rays : cone_rays) h.cones.push_back(rays.empty() ? zero_cone(rank) : make_cone(rays, rank));
    for (std::size_t i = 0; i < h.cones.size(); ++i)
        for (std::size_t j = i + 1; j < h.cones.size(); ++j) {
            Cone meet = intersect_cones(h.cones[i], h.cones[j]);
            if (!is_face(meet, h.cones[i]) || !is_face(meet, h.cones[j]))
                throw NotAFace("cones of the fan meet outside a common face", meet.rays.empty() ? std::vector<long>{} : to_longs(meet.rays.front()));
            for (const auto& r : meet.rays)
                if (dot(slopes[i], r) != dot(slopes[j], r)) throw InvalidGrading("slopes disagree on a shared ray", to_longs(r));
        }
    return h;
}

inline Int height_exponent(const PiecewiseLinearHeight& h, const Vec& lambda) {
    if (lambda.size() != h.rank) throw DimensionMismatch("point has the wrong rank");
    for (std::size_t i = 0; i < h.cones.size(); ++i)
        if (contains_point(h.cones[i], lambda)) return dot(h.slopes[i], lambda);
    throw OutsideSupport("point lies outside the fan", to_longs(lambda));
}

// sum over lambda in the support of chi(lambda)^deg u^(2 deg phi(lambda)).
inline Series height_fourier_local(const PiecewiseLinearHeight& h, const MonomialCharacter& chi, long deg, long U) {
    if (chi.rank() != h.rank) throw DimensionMismatch("character and fan have different ranks");
    Series s(chi.cyclotomic_order, chi.nvars(), U);
    if (U < 0) return s;
    std::set<Vec> seen;
    for (std::size_t i = 0; i < h.cones.size(); ++i) {
        MonomialCharacter psi = chi.times_u(scaled(h.slopes[i], 2));
        require_positivity(h.cones[i], psi);
        for (const auto& level : points_up_to_level(h.cones[i], psi.u, U / deg))
            for (const auto& lambda : level)
                if (seen.insert(lambda).second) s.add_term(psi.at(lambda, deg));
    }
    return s;
}

inline Series height_fourier_local(const PiecewiseLinearHeight& h, const CharacterSpec& chi, long deg, long U) {
    return height_fourier_local(h, monomial_character(chi), deg, U);
}

inline Series height_fourier_global(const PiecewiseLinearHeight& h, const Curve& curve, const MonomialCharacter& chi, long U,
                                    const EngineOptions& opts = {}) {
    return euler_product(
        curve, chi.cyclotomic_order, chi.nvars(), U, [&](long deg, long V) { return height_fourier_local(h, chi, deg, V); }, opts);
}

inline Series height_fourier_global(const PiecewiseLinearHeight& h, const Curve& curve, const CharacterSpec& chi, long U,
                                    const EngineOptions& opts = {}) {
    return height_fourier_global(h, curve, monomial_character(chi), U, opts);
}

// ---------------------------------------------------------------------------
// Bridge to the automorphic engine

struct BridgeSample {
    long degree;
    std::size_t cone; // index, or cones.size() for the whole fan
    Series height, automorphic;
    bool equal;
};

struct BridgeReport {
    std::vector<BridgeSample> samples;

    bool ok() const {
        for (const auto& s : samples)
            if (!s.equal) return false;
        return true;
    }
};

// Each maximal cone alone against automorphic_local_factor with eta = 2 s,
// then the whole fan against inclusion-exclusion over intersections of cones.
inline BridgeReport verify_height_bridge(const PiecewiseLinearHeight& h, const MonomialCharacter& chi, long U, long max_degree = 3) {
    BridgeReport rep;
    const std::size_t k = h.cones.size();
    if (k > 16) throw DimensionMismatch("fan too large for inclusion-exclusion");
    for (long d = 1; d <= max_degree; ++d) {
        for (std::size_t i = 0; i < k; ++i) {
            PiecewiseLinearHeight single{h.rank, {h.cones[i]}, {h.slopes[i]}};
            Series lhs = height_fourier_local(single, chi, d, U);
            Series rhs = h.cones[i].rays.empty() ? Series::one(chi.cyclotomic_order, chi.nvars()).truncated(U)
                                                 : automorphic_local_factor(h.cones[i], chi.times_u(scaled(h.slopes[i], 2)), d, U);
            rep.samples.push_back({d, i, lhs, rhs, lhs == rhs});
        }
        Series total(chi.cyclotomic_order, chi.nvars(), U);
        for (std::size_t mask = 1; mask < (std::size_t{1} << k); ++mask) {
            Cone meet;
            std::size_t first = k, count = 0;
            for (std::size_t i = 0; i < k; ++i) {
                if (!(mask >> i & 1)) continue;
                ++count;
                if (first == k) {
                    first = i;
                    meet = h.cones[i];
                } else {
                    meet = intersect_cones(meet, h.cones[i]);
                }
            }
            PiecewiseLinearHeight piece{h.rank, {meet}, {h.slopes[first]}};
            Series term = height_fourier_local(piece, chi, d, U);
            total = count % 2 == 1 ? total + term : total - term;
        }
        Series whole = height_fourier_local(h, chi, d, U);
        rep.samples.push_back({d, k, whole, total.truncated(U), whole == total.truncated(U)});
    }
    return rep;
}

} // namespace toricdual
