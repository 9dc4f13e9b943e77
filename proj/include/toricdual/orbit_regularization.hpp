#pragma once

// Orbitwise regularized periods. An orbit O_tau of X contributes through its
// closure, a toric variety for K = T / S_tau, once the character is trivial on
// the stabilizer; the dual orbit contributes on the spectral side when it is a
// minimal fixed orbit of the extended parameter.
//
// Cuspidality is tested on every nonzero face, the full cone included. With
// only proper faces a rank-one character with chi(1) |eta|^{1/2} = 1 would be
// cuspidal while its parameter fixes the dense orbit of the dual line.

#include <optional>
#include <string>
#include <vector>

#include "period_engines.hpp"

namespace toricdual {

enum class ContributionStatus { computed, vanished, divergent };

inline const char* to_string(ContributionStatus s) {
    switch (s) {
    case ContributionStatus::computed: return "computed";
    case ContributionStatus::vanished: return "vanished";
    case ContributionStatus::divergent: return "divergent";
    }
    return "?";
}

struct OrbitContribution {
    OrbitDescriptor orbit;
    ContributionStatus status = ContributionStatus::vanished;
    std::string reason; // triviality-failed, not-relatively-cuspidal, not-fixed, dominated-by-larger-fixed-orbit
    std::optional<Series> series;
    std::vector<long> witness; // failing face ray or non-positive ray
    std::string note;
};

inline bool trivial_on(const MonomialCharacter& psi, const Matrix& basis) {
    for (const auto& b : basis)
        if (!psi.trivial_at(b)) return false;
    return true;
}

// First nonzero face of sigma (in face-lattice order) on whose saturated span
// psi is trivial.
inline std::optional<Cone> cuspidality_witness(const Cone& sigma, const MonomialCharacter& psi) {
    for (const auto& f : faces(sigma).faces) {
        if (f.rays.empty()) continue;
        if (trivial_on(psi, saturate_sublattice(f.rays, sigma.ambient_rank))) return f;
    }
    return std::nullopt;
}

struct CuspidalityResult {
    bool cuspidal = true;
    std::optional<Cone> witness;
};

inline CuspidalityResult is_cuspidal(const GradedToricDatum& d, const MonomialCharacter& chi) {
    auto w = cuspidality_witness(d.sigma, chi.times_u(d.eta));
    return {!w.has_value(), w};
}

inline CuspidalityResult is_cuspidal(const GradedToricDatum& d, const CharacterSpec& chi) {
    return is_cuspidal(d, monomial_character(chi));
}

// Orbit of tau_check is fixed by the extended parameter iff
// mu -> phi(mu) u^(rho.mu) is trivial on tau_check^perp.
inline Matrix face_perp(const Cone& face, std::size_t n) { return kernel_basis(face.rays, n); }

inline bool orbit_fixed(const GradedToricDatum& d_check, const Cone& face, const MonomialCharacter& phi) {
    return trivial_on(phi.times_u(d_check.rho), face_perp(face, d_check.rank));
}

struct GenericityResult {
    bool generic = true;
    std::vector<Cone> fixed_faces; // in face-lattice order
};

inline GenericityResult is_generic(const GradedToricDatum& d_check, const MonomialCharacter& phi) {
    FaceLattice fl = faces(d_check.sigma);
    GenericityResult g;
    std::vector<bool> fixed(fl.faces.size());
    for (std::size_t i = 0; i < fl.faces.size(); ++i) {
        fixed[i] = orbit_fixed(d_check, fl.faces[i], phi);
        if (fixed[i]) g.fixed_faces.push_back(fl.faces[i]);
    }
    for (const auto& [i, j] : fl.order)
        if (fixed[i] && !fixed[j]) throw std::logic_error("fixed orbits do not form an up-set in the face lattice");
    g.generic = g.fixed_faces.size() == 1 && g.fixed_faces.front() == d_check.sigma;
    return g;
}

inline GenericityResult is_generic(const GradedToricDatum& d_check, const CharacterSpec& phi) {
    return is_generic(d_check, monomial_character(phi));
}

// psi_bar on X_*(K) with psi = psi_bar o projection, checked on a basis.
inline MonomialCharacter descend(const MonomialCharacter& psi, const QuotientData& q) {
    MonomialCharacter bar = psi.compose(q.section);
    for (std::size_t i = 0; i < psi.rank(); ++i) {
        Vec e = unit_vec(psi.rank(), i);
        Monomial lhs = psi.at(e), rhs = bar.at(q.free_projection(e));
        if (!(Series::monomial(psi.cyclotomic_order, lhs) == Series::monomial(psi.cyclotomic_order, rhs)))
            throw DimensionMismatch("character does not descend to the quotient lattice");
    }
    return bar;
}

inline Series closure_euler_product(const Cone& cone, const MonomialCharacter& psibar, const Curve& curve, long V,
                                    const EngineOptions& opts) {
    if (cone.ambient_rank == 0) return Series::one(psibar.cyclotomic_order, psibar.nvars()).truncated(V);
    require_positivity(cone, psibar);
    Matrix hb = hilbert_basis(dual_cone(cone));
    return euler_product(
        curve, psibar.cyclotomic_order, psibar.nvars(), V,
        [&](long deg, long W) { return automorphic_local_factor(cone, hb, psibar, deg, W); }, opts);
}

inline OrbitContribution regularized_automorphic_contribution(const GradedToricDatum& d, const OrbitDescriptor& o, const Curve& curve,
                                                              const MonomialCharacter& chi, long U, const EngineOptions& opts = {}) {
    OrbitContribution c;
    c.orbit = o;
    MonomialCharacter psi = chi.times_u(d.eta);
    for (const auto& b : o.stabilizer_basis)
        if (!psi.trivial_at(b)) {
            c.reason = "triviality-failed";
            c.witness = to_longs(b);
            return c;
        }
    MonomialCharacter psibar = descend(psi, o.quotient);
    if (auto w = cuspidality_witness(o.closure_cone, psibar)) {
        c.reason = "not-relatively-cuspidal";
        c.witness = to_longs(w->rays.front());
        return c;
    }
    Monomial pre = half_canonical_value(curve, chi, d.rho, d.rho_den);
    try {
        Series e = closure_euler_product(o.closure_cone, psibar, curve, U - pre.u_exp, opts);
        c.series = (monomial_as_series(chi, pre) * e).truncated(U);
        c.status = ContributionStatus::computed;
    } catch (const PositivityViolation& e) {
        c.status = ContributionStatus::divergent;
        c.note = e.what();
        c.witness = e.witness();
    }
    return c;
}

inline OrbitContribution regularized_spectral_contribution(const GradedToricDatum& d_check, const OrbitDescriptor& o, const Curve& curve,
                                                           const MonomialCharacter& phi, long U, const EngineOptions& opts = {}) {
    OrbitContribution c;
    c.orbit = o;
    const std::size_t r = d_check.rank;
    MonomialCharacter psi = phi.times_u(d_check.rho);
    Matrix perp = face_perp(o.face, r);
    for (const auto& b : perp)
        if (!psi.trivial_at(b)) {
            c.reason = "not-fixed";
            c.witness = to_longs(b);
            return c;
        }
    for (const auto& f : faces(o.face).faces) {
        if (f == o.face) continue;
        if (orbit_fixed(d_check, f, phi)) {
            c.reason = "dominated-by-larger-fixed-orbit";
            c.witness = f.rays.empty() ? std::vector<long>(r, 0) : to_longs(f.rays.front());
            return c;
        }
    }
    QuotientData q = quotient_lattice(r, perp);
    MonomialCharacter psibar = descend(psi, q);
    Cone cone = image_cone(dual_cone(d_check.sigma), q.free_projection);
    Monomial pre = spectral_prefactor(d_check, curve, phi);
    try {
        Series e(phi.cyclotomic_order, phi.nvars());
        const long V = U - pre.u_exp;
        if (cone.ambient_rank == 0) {
            e = Series::one(phi.cyclotomic_order, phi.nvars()).truncated(V);
        } else {
            require_positivity(cone, psibar);
            e = euler_product(
                curve, phi.cyclotomic_order, phi.nvars(), V,
                [&](long deg, long W) { return spectral_local_factor_on(cone, psibar, deg, W); }, opts);
        }
        c.series = (monomial_as_series(phi, pre) * e).truncated(U);
        c.status = ContributionStatus::computed;
    } catch (const PositivityViolation& e) {
        c.status = ContributionStatus::divergent;
        c.note = e.what();
        c.witness = e.witness();
    }
    return c;
}

// ---------------------------------------------------------------------------
// Orbitwise verifier

enum class OrbitVerdict { equal, vanished, both_divergent, mismatch };

inline const char* to_string(OrbitVerdict v) {
    switch (v) {
    case OrbitVerdict::equal: return "equal";
    case OrbitVerdict::vanished: return "vanished";
    case OrbitVerdict::both_divergent: return "both-divergent";
    case OrbitVerdict::mismatch: return "mismatch";
    }
    return "?";
}

struct OrbitPairReport {
    std::string direction; // side carrying the automorphic contribution
    OrbitContribution automorphic, spectral;
    std::optional<Series> rhs; // u^a * spectral
    std::optional<Comparison> comparison;
    OrbitVerdict verdict = OrbitVerdict::mismatch;
};

struct OrbitwiseReport {
    std::vector<OrbitPairReport> pairs;

    bool ok() const {
        for (const auto& p : pairs)
            if (p.verdict == OrbitVerdict::mismatch) return false;
        return true;
    }
};

inline OrbitPairReport compare_orbit_pair(const std::string& label, const GradedToricDatum& aut_side, const GradedToricDatum& spec_side,
                                          const OrbitDescriptor& o, const OrbitDescriptor& star, long a, const Curve& curve,
                                          const MonomialCharacter& chi, long U, const EngineOptions& opts) {
    OrbitPairReport p;
    p.direction = label;
    p.automorphic = regularized_automorphic_contribution(aut_side, o, curve, chi, U, opts);
    p.spectral = regularized_spectral_contribution(spec_side, star, curve, chi, U - a, opts);
    using S = ContributionStatus;
    const S sa = p.automorphic.status, ss = p.spectral.status;
    if (sa == S::computed && ss == S::computed) {
        p.rhs = (u_power(chi.cyclotomic_order, chi.nvars(), delta_quarter_exponent(curve, a)) * *p.spectral.series).truncated(U);
        p.comparison = compare_series(*p.automorphic.series, *p.rhs, U);
        p.verdict = p.comparison->equal ? OrbitVerdict::equal : OrbitVerdict::mismatch;
    } else if (sa == S::vanished && ss == S::vanished) {
        p.verdict = OrbitVerdict::vanished;
    } else if (sa == S::divergent && ss == S::divergent) {
        p.verdict = OrbitVerdict::both_divergent;
    }
    return p;
}

inline OrbitwiseReport verify_langlands_dual_periods(const GradedDualPair& pair, const Curve& curve, const MonomialCharacter& chi, long U,
                                                     const EngineOptions& opts = {}) {
    OrbitwiseReport rep;
    const long a = pair.duality_exponent();
    for (const auto& o : orbits(pair.side_x))
        rep.pairs.push_back(compare_orbit_pair("X", pair.side_x, pair.side_xcheck, o, dual_orbit(o, pair), a, curve, chi, U, opts));
    GradedDualPair mirror = pair.swapped();
    for (const auto& o : orbits(mirror.side_x))
        rep.pairs.push_back(
            compare_orbit_pair("Xcheck", mirror.side_x, mirror.side_xcheck, o, dual_orbit(o, mirror), a, curve, chi, U, opts));
    return rep;
}

inline OrbitwiseReport verify_langlands_dual_periods(const GradedDualPair& pair, const Curve& curve, const CharacterSpec& chi, long U,
                                                     const EngineOptions& opts = {}) {
    return verify_langlands_dual_periods(pair, curve, monomial_character(chi), U, opts);
}

} // namespace toricdual
