#pragma once

// Automorphic and spectral periods of graded toric data as truncated Euler
// products over the places of P^1.
//
// The two local factors enumerate the same monoid by different routes: the
// automorphic one filters a bounding box by pairing against the Hilbert basis
// of the dual cone, the spectral one walks the primal level sets of the
// effective weight. Their agreement is the local identity behind weak
// numerical duality.

#include <atomic>
#include <exception>
#include <functional>
#include <string>
#include <thread>
#include <vector>

#include "function_field.hpp"

namespace toricdual {

struct EngineOptions {
    unsigned jobs = 1;
};

// The u-exponent of psi must be positive on every ray, so that each u-order
// receives finitely many lattice points.
inline void require_positivity(const Cone& c, const MonomialCharacter& psi) {
    if (psi.rank() != c.ambient_rank) throw DimensionMismatch("character and cone have different ranks");
    if (!c.strongly_convex()) throw PositivityViolation("cone contains a line", to_longs(c.lineality.front()));
    for (const auto& r : c.rays)
        if (dot(psi.u, r) <= 0)
            throw PositivityViolation("effective weight " + dot(psi.u, r).get_str() + " on a ray", to_longs(r));
}

inline Series truncated_one(const MonomialCharacter& psi, long U) { return Series::one(psi.cyclotomic_order, psi.nvars()).truncated(U); }

// Sum over lambda in sigma of psi(lambda)^deg, truncated at u^U, with
// membership decided by <lambda, h> >= 0 for h in the dual Hilbert basis.
inline Series automorphic_local_factor(const Cone& sigma, const Matrix& dual_hilbert, const MonomialCharacter& psi, long deg,
                                       long U) {
    require_positivity(sigma, psi);
    Series s(psi.cyclotomic_order, psi.nvars(), U);
    if (U < 0) return s;
    const long level = U / deg;
    for_each_box_point(sigma, psi.u, level, [&](const Vec& lambda) {
        Int l = dot(psi.u, lambda);
        if (l < 0 || l > level) return;
        for (const auto& h : dual_hilbert)
            if (dot(lambda, h) < 0) return;
        s.add_term(psi.at(lambda, deg));
    });
    return s;
}

inline Series automorphic_local_factor(const Cone& sigma, const MonomialCharacter& psi, long deg, long U) {
    return automorphic_local_factor(sigma, hilbert_basis(dual_cone(sigma)), psi, deg, U);
}

inline Series automorphic_local_factor(const GradedToricDatum& d, const CharacterSpec& chi, long deg, long U) {
    return automorphic_local_factor(d.sigma, monomial_character(chi).times_u(d.eta), deg, U);
}

// Sum over levels n <= U/deg of the primal level sets of `cone` under the
// weight psi.u.
inline Series spectral_local_factor_on(const Cone& cone, const MonomialCharacter& psi, long deg, long U) {
    require_positivity(cone, psi);
    Series s(psi.cyclotomic_order, psi.nvars(), U);
    if (U < 0) return s;
    auto levels = points_up_to_level(cone, psi.u, U / deg);
    for (const auto& level : levels)
        for (const auto& mu : level) s.add_term(psi.at(mu, deg));
    return s;
}

// Graded trace on k[sigma cap X^*(T_check)], sigma = dual of d_check's cone.
inline Series spectral_local_factor(const GradedToricDatum& d_check, const MonomialCharacter& phi, long deg, long U) {
    return spectral_local_factor_on(dual_cone(d_check.sigma), phi.times_u(d_check.rho), deg, U);
}

inline Series spectral_local_factor(const GradedToricDatum& d_check, const CharacterSpec& phi, long deg, long U) {
    return spectral_local_factor(d_check, monomial_character(phi), deg, U);
}

// prod_{deg <= V} factor(deg, V)^(a_deg). Factors for distinct degrees run on
// up to opts.jobs threads; they are multiplied in degree order afterwards.
inline Series euler_product(const Curve& curve, long N, std::size_t nvars, long V,
                            const std::function<Series(long, long)>& factor, const EngineOptions& opts = {}) {
    Series result = Series::one(N, nvars).truncated(V);
    if (V < 1) return result;
    PlaceTable places = place_counts(curve, V);
    std::vector<Series> powered(static_cast<std::size_t>(V));
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(V));
    std::atomic<long> next{1};
    auto work = [&] {
        for (long d = next++; d <= V; d = next++) {
            try {
                Series f = factor(d, V);
                const Int& a = places[d];
                if (!a.fits_ulong_p()) throw DimensionMismatch("place count does not fit a machine word");
                powered[d - 1] = f.pow(a.get_ui());
            } catch (...) {
                errors[d - 1] = std::current_exception();
            }
        }
    };
    unsigned threads = std::max(1u, std::min<unsigned>(opts.jobs, static_cast<unsigned>(V)));
    if (threads == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (unsigned i = 0; i < threads; ++i) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);
    for (const auto& p : powered) result = result * p;
    return result.truncated(V);
}

inline Series monomial_as_series(const MonomialCharacter& chi, const Monomial& m) { return Series::monomial(chi.cyclotomic_order, m); }

// chi(rho(d^{-1/2})) * prod_v (automorphic local factor)^(a_v), valid to u^U.
inline Series automorphic_period(const GradedToricDatum& d, const Curve& curve, const MonomialCharacter& chi, long U,
                                 const EngineOptions& opts = {}) {
    Monomial pre = half_canonical_value(curve, chi, d.rho, d.rho_den);
    MonomialCharacter psi = chi.times_u(d.eta);
    Matrix hb = hilbert_basis(dual_cone(d.sigma));
    require_positivity(d.sigma, psi);
    Series e = euler_product(
        curve, chi.cyclotomic_order, chi.nvars(), U - pre.u_exp,
        [&](long deg, long V) { return automorphic_local_factor(d.sigma, hb, psi, deg, V); }, opts);
    return (monomial_as_series(chi, pre) * e).truncated(U);
}

inline Series automorphic_period(const GradedToricDatum& d, const Curve& curve, const CharacterSpec& chi, long U,
                                 const EngineOptions& opts = {}) {
    return automorphic_period(d, curve, monomial_character(chi), U, opts);
}

// zeta_chi * u^((1-g)(eps - r)) with zeta_chi = chi(eta_check(d^{-1/2})),
// where eta_check = d_check.eta is the grading of the partner side.
inline Monomial spectral_prefactor(const GradedToricDatum& d_check, const Curve& curve, const MonomialCharacter& chi) {
    Monomial z = half_canonical_value(curve, chi, d_check.eta);
    long eps = dot(d_check.rho, d_check.eta).get_si();
    z.u_exp += delta_quarter_exponent(curve, eps - static_cast<long>(d_check.rank));
    return z;
}

inline Series spectral_period(const GradedToricDatum& d_check, const Curve& curve, const MonomialCharacter& phi, long U,
                              const EngineOptions& opts = {}) {
    Monomial pre = spectral_prefactor(d_check, curve, phi);
    MonomialCharacter psi = phi.times_u(d_check.rho);
    Cone cone = dual_cone(d_check.sigma);
    require_positivity(cone, psi);
    Series e = euler_product(
        curve, phi.cyclotomic_order, phi.nvars(), U - pre.u_exp,
        [&](long deg, long V) { return spectral_local_factor_on(cone, psi, deg, V); }, opts);
    return (monomial_as_series(phi, pre) * e).truncated(U);
}

inline Series spectral_period(const GradedToricDatum& d_check, const Curve& curve, const CharacterSpec& phi, long U,
                              const EngineOptions& opts = {}) {
    return spectral_period(d_check, curve, monomial_character(phi), U, opts);
}

// ---------------------------------------------------------------------------
// Weak duality verifier

struct Comparison {
    bool equal = false;
    long first_mismatch = Series::kExact; // u-exponent, kExact when equal
    ZPoly lhs, rhs;                        // coefficients at the mismatch
    long compared_upto = 0;
};

inline Comparison compare_series(const Series& lhs, const Series& rhs, long U) {
    Comparison c;
    c.compared_upto = std::min({U, lhs.order(), rhs.order()});
    long e = lhs.truncated(c.compared_upto).first_mismatch(rhs.truncated(c.compared_upto));
    c.equal = e == Series::kExact && c.compared_upto >= U;
    c.first_mismatch = e;
    if (e != Series::kExact) {
        c.lhs = lhs.coefficient(e);
        c.rhs = rhs.coefficient(e);
    }
    return c;
}

struct LocalFactorSample {
    long degree;
    Series automorphic;
    Series spectral;
    bool equal;
};

struct DirectionReport {
    std::string label;
    bool applicable = true;
    std::string note; // reason when not applicable
    std::vector<long> witness;
    Series automorphic_prefactor, spectral_prefactor;
    long duality_exponent = 0;
    Series automorphic, spectral, rhs; // rhs = u^a * spectral
    std::vector<LocalFactorSample> local_factors;
    Comparison comparison;
};

struct PeriodReport {
    std::vector<DirectionReport> directions;

    bool equal() const {
        for (const auto& d : directions)
            if (d.applicable && !d.comparison.equal) return false;
        return true;
    }
};

// P_{aut_side}(chi) against u^a L_{spec_side}(chi).
inline DirectionReport verify_direction(const std::string& label, const GradedToricDatum& aut_side, const GradedToricDatum& spec_side,
                                        long a, const Curve& curve, const MonomialCharacter& chi, long U,
                                        const EngineOptions& opts = {}, long sample_degrees = 3) {
    DirectionReport r;
    r.label = label;
    r.duality_exponent = a;
    const long N = chi.cyclotomic_order;
    r.automorphic_prefactor = monomial_as_series(chi, half_canonical_value(curve, chi, aut_side.rho, aut_side.rho_den));
    r.spectral_prefactor = monomial_as_series(chi, spectral_prefactor(spec_side, curve, chi));
    try {
        r.automorphic = automorphic_period(aut_side, curve, chi, U, opts);
        r.spectral = spectral_period(spec_side, curve, chi, U - a, opts);
    } catch (const PositivityViolation& e) {
        r.applicable = false;
        r.note = e.what();
        r.witness = e.witness();
        return r;
    }
    r.rhs = (u_power(N, chi.nvars(), delta_quarter_exponent(curve, a)) * r.spectral).truncated(U);
    r.comparison = compare_series(r.automorphic, r.rhs, U);
    MonomialCharacter psi = chi.times_u(aut_side.eta);
    Matrix hb = hilbert_basis(dual_cone(aut_side.sigma));
    for (long d = 1; d <= std::min(sample_degrees, U); ++d) {
        Series fa = automorphic_local_factor(aut_side.sigma, hb, psi, d, U);
        Series fs = spectral_local_factor(spec_side, chi, d, U);
        r.local_factors.push_back({d, fa, fs, fa == fs});
    }
    return r;
}

// Both directions: (X automorphic, X_check spectral) and the mirror.
inline PeriodReport verify_weak_duality(const GradedDualPair& pair, const Curve& curve, const MonomialCharacter& chi, long U,
                                        const EngineOptions& opts = {}) {
    PeriodReport rep;
    const long a = pair.duality_exponent();
    rep.directions.push_back(verify_direction("X", pair.side_x, pair.side_xcheck, a, curve, chi, U, opts));
    rep.directions.push_back(verify_direction("Xcheck", pair.side_xcheck, pair.side_x, a, curve, chi, U, opts));
    return rep;
}

inline PeriodReport verify_weak_duality(const GradedDualPair& pair, const Curve& curve, const CharacterSpec& chi, long U,
                                        const EngineOptions& opts = {}) {
    return verify_weak_duality(pair, curve, monomial_character(chi), U, opts);
}

} // namespace toricdual
