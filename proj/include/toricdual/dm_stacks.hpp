#pragma once

// Quotients by finite diagonalizable groups. A full-rank inclusion
// A : X_*(T) -> X_*(T') presents T = T'/mu with mu dual to coker A. The
// covering datum (T', Y) carries all the geometry; the stack side is seen
// through it, by pulling characters back along A or A^T and by summing over
// the characters of coker A.

#include <numeric>
#include <string>
#include <vector>

#include "period_engines.hpp"

namespace toricdual {

struct IsogenyDatum {
    LatticeMap inclusion;          // X_*(T) -> X_*(T'), square of full rank
    SmithDecomposition smith;      // of inclusion.matrix
    Int index;                     // |det| = [X_*(T') : A X_*(T)]
    std::vector<Int> invariants;   // torsion invariants of coker A (> 1)
    Int exponent = 1;              // largest invariant

    std::size_t rank() const { return inclusion.source_rank; }
};

inline IsogenyDatum make_isogeny(const LatticeMap& a) {
    if (a.source_rank != a.target_rank) throw DimensionMismatch("isogeny needs lattices of equal rank");
    auto idx = lattice_index(a);
    if (!idx) throw DimensionMismatch("inclusion is not of full rank");
    IsogenyDatum iso{a, smith_normal_form(a.matrix, a.source_rank), *idx, {}, 1};
    for (const auto& d : iso.smith.diag)
        if (d > 1) {
            iso.invariants.push_back(d);
            iso.exponent = d; // divisibility chain: the last one is the largest
        }
    return iso;
}

inline IsogenyDatum dual_isogeny(const IsogenyDatum& iso) { return make_isogeny(iso.inclusion.transposed()); }

inline void check_field(const IsogenyDatum& iso, const Curve& curve) {
    Int q = curve.q;
    if (gcd(q, iso.exponent) != 1 || (q - 1) % iso.exponent != 0)
        throw IncompatibleField("q = " + q.get_str() + " is not 1 mod the exponent " + iso.exponent.get_str() + " of mu");
}

inline std::vector<long> lex_index(std::size_t i, const std::vector<long>& radices) {
    std::vector<long> t(radices.size());
    for (std::size_t k = radices.size(); k-- > 0;) {
        t[k] = static_cast<long>(i % static_cast<std::size_t>(radices[k]));
        i /= static_cast<std::size_t>(radices[k]);
    }
    return t;
}

// Covectors a_t (mod N) of the characters lambda' -> zeta_N^(a_t . lambda')
// of X_*(T') trivial on A X_*(T), one per t in prod Z/d_i, lexicographic.
inline Matrix twist_covectors(const IsogenyDatum& iso, long N) {
    if (N % iso.exponent.get_si() != 0)
        throw MissingRoots("Q(zeta_" + std::to_string(N) + ") lacks the roots of unity of order " + iso.exponent.get_str());
    const std::size_t r = iso.rank();
    std::vector<long> radices;
    for (const auto& d : iso.smith.diag) radices.push_back(d.get_si());
    Matrix out;
    const std::size_t m = iso.index.get_ui();
    for (std::size_t i = 0; i < m; ++i) {
        std::vector<long> t = lex_index(i, radices);
        Vec a = zero_vec(r);
        for (std::size_t k = 0; k < r; ++k) {
            if (t[k] == 0) continue;
            a = a + scaled(iso.smith.left[k], Int(N / radices[k] * t[k]));
        }
        for (auto& x : a) x = mod_floor(x.get_si(), N);
        out.push_back(std::move(a));
    }
    return out;
}

// (1/m) sum_t zeta^(a_t . x): the indicator of x in A X_*(T).
inline Cyclo fourier_indicator(const IsogenyDatum& iso, long N, const Vec& x) {
    Cyclo s(N);
    for (const auto& a : twist_covectors(iso, N)) s += Cyclo::zeta_power(N, mod_floor(dot(a, x).get_si(), N));
    return s.scaled(mpq_class(1) / mpq_class(iso.index));
}

inline bool same_character(const MonomialCharacter& a, const MonomialCharacter& b) {
    long m = std::lcm(a.cyclotomic_order, b.cyclotomic_order);
    return a.with_order(m) == b.with_order(m);
}

struct LiftFamily {
    MonomialCharacter base;
    Matrix twists;
    std::vector<MonomialCharacter> members;
};

namespace detail {

template <class Error>
LiftFamily lift_family(const MonomialCharacter& lower, const IsogenyDatum& iso, const MonomialCharacter& base, const char* what) {
    if (base.rank() != iso.rank() || lower.rank() != iso.rank()) throw DimensionMismatch("character rank does not match the isogeny");
    if (lower.nvars() != base.nvars()) throw DimensionMismatch("characters use different formal variables");
    if (!same_character(base.compose(iso.inclusion), lower)) throw Error(std::string("character on the cover is not ") + what);
    LiftFamily f{base, twist_covectors(iso, base.cyclotomic_order), {}};
    for (const auto& a : f.twists) f.members.push_back(base.times_zeta(a));
    return f;
}

} // namespace detail

// Unramified lifts of phi along the dual isogeny, parametrized by mu_check.
inline LiftFamily unramified_lifts(const MonomialCharacter& phi, const IsogenyDatum& iso, const MonomialCharacter& base_lift) {
    return detail::lift_family<NotALift>(phi, iso, base_lift, "a lift of the parameter");
}

// Extensions of chi on [T] to [T'] through pi; same family, other side.
inline LiftFamily unramified_extensions(const MonomialCharacter& chi, const IsogenyDatum& iso, const MonomialCharacter& base_ext) {
    return detail::lift_family<NotAnExtension>(chi, iso, base_ext, "an extension of the character");
}

// ---------------------------------------------------------------------------
// Induced pair

struct InducedGradedPair {
    GradedDualPair base_pair; // (T', Y) and its dual
    IsogenyDatum isogeny;
    Vec rho_lift;             // numerator of A^{-1} rho'
    Int rho_den = 1;
    Vec eta_pullback;         // A^T eta', so <rho_lift, eta_pullback> = epsilon

    // Y's cone pulled back to X_*(T) with the induced grading.
    GradedToricDatum stack_datum() const {
        const GradedToricDatum& y = base_pair.side_x;
        Matrix ineqs;
        LatticeMap at = isogeny.inclusion.transposed();
        for (const auto& f : y.sigma.facets) ineqs.push_back(at(f));
        Cone pre = dual_cone(make_cone_general(ineqs, isogeny.rank()));
        return {isogeny.rank(), pre, rho_lift, rho_den, eta_pullback, true};
    }
};

inline InducedGradedPair make_induced_pair(const GradedToricDatum& covering, const IsogenyDatum& iso) {
    if (covering.rank != iso.rank()) throw DimensionMismatch("covering datum and isogeny have different ranks");
    InducedGradedPair p{toric_dual(covering), iso, {}, 1, iso.inclusion.transposed()(covering.eta)};
    // rho_lift = adj(A) rho' / det(A), reduced
    const std::size_t r = iso.rank();
    Matrix a = iso.inclusion.matrix;
    Int det = determinant(a);
    Vec num(r);
    for (std::size_t i = 0; i < r; ++i) {
        Matrix ai = a;
        for (std::size_t k = 0; k < r; ++k) ai[k][i] = covering.rho[k];
        num[i] = determinant(ai); // Cramer
    }
    Int g = abs(det);
    for (const auto& x : num) g = gcd(g, x);
    if (det < 0) g = -g;
    for (auto& x : num) x /= g;
    p.rho_lift = num;
    p.rho_den = det / g;
    if (!(iso.inclusion(p.rho_lift) == scaled(covering.rho, p.rho_den))) throw InvalidGrading("grading lift does not project to rho'");
    return p;
}

// ---------------------------------------------------------------------------
// Stack periods

// P_{X_check}(chi): the covering dual datum at chi o pi_check.
inline Series stack_automorphic_period(const InducedGradedPair& p, const Curve& curve, const MonomialCharacter& chi, long U,
                                       const EngineOptions& opts = {}) {
    check_field(p.isogeny, curve);
    return automorphic_period(p.base_pair.side_xcheck, curve, chi.compose(p.isogeny.inclusion.transposed()), U, opts);
}

// Sum over the lifts of phi to T'_check of the covering spectral periods,
// each with its own prefactor phi_t(eta_check'(d^{-1/2})).
inline Series stack_spectral_period_unramified(const InducedGradedPair& p, const Curve& curve, const MonomialCharacter& phi,
                                               const MonomialCharacter& base_lift, long U, const EngineOptions& opts = {}) {
    check_field(p.isogeny, curve);
    LiftFamily f = unramified_lifts(phi, p.isogeny, base_lift);
    Series total(base_lift.cyclotomic_order, base_lift.nvars(), U);
    for (const auto& m : f.members) total = total + spectral_period(p.base_pair.side_xcheck, curve, m, U, opts);
    return total.truncated(U);
}

// (1/m) sum over extensions chi_t of chi to [T'] of P_Y(chi_t).
inline Series unramified_automorphic_period_liftsum(const InducedGradedPair& p, const Curve& curve, const MonomialCharacter& chi,
                                                    const MonomialCharacter& base_ext, long U, const EngineOptions& opts = {}) {
    check_field(p.isogeny, curve);
    LiftFamily f = unramified_extensions(chi, p.isogeny, base_ext);
    Series total(base_ext.cyclotomic_order, base_ext.nvars(), U);
    for (const auto& m : f.members) total = total + automorphic_period(p.base_pair.side_x, curve, m, U, opts);
    return total.scaled(mpq_class(1) / mpq_class(p.isogeny.index)).truncated(U);
}

struct DirectModel {
    Series series;     // direct orbit-sum model
    Series normative;  // lift-sum value
    Series difference; // series - normative
    bool agrees = false;
};

// Unfolding over X_*(T) cap A^{-1}(sigma'): m unramified orbit classes, each
// weighted by 1/|mu(F)| = 1/m, with the prefactor of the base extension.
// Experimental; the comparison is reported, never asserted.
inline DirectModel unramified_automorphic_period_direct(const InducedGradedPair& p, const Curve& curve, const MonomialCharacter& chi,
                                                        const MonomialCharacter& base_ext, long U, const EngineOptions& opts = {}) {
    check_field(p.isogeny, curve);
    unramified_extensions(chi, p.isogeny, base_ext);
    const GradedToricDatum& y = p.base_pair.side_x;
    GradedToricDatum x = p.stack_datum();
    Monomial pre = half_canonical_value(curve, base_ext, y.rho);
    MonomialCharacter psi = base_ext.times_u(y.eta).compose(p.isogeny.inclusion);
    require_positivity(x.sigma, psi);
    Matrix hb = hilbert_basis(dual_cone(x.sigma));
    Series e = euler_product(
        curve, psi.cyclotomic_order, psi.nvars(), U - pre.u_exp,
        [&](long deg, long V) { return automorphic_local_factor(x.sigma, hb, psi, deg, V); }, opts);
    DirectModel d;
    d.series = (monomial_as_series(base_ext, pre) * e).truncated(U);
    d.normative = unramified_automorphic_period_liftsum(p, curve, chi, base_ext, U, opts);
    d.difference = (d.series - d.normative).truncated(U);
    d.agrees = d.series == d.normative;
    return d;
}

// ---------------------------------------------------------------------------
// Verifier

struct StackIdentity {
    std::string label;
    bool applicable = true;
    std::string note;
    std::vector<long> witness;
    Series lhs, rhs;
    Comparison comparison;
};

struct StackReport {
    Int index;
    std::vector<Int> invariants;
    long duality_exponent = 0;
    StackIdentity identity_stack_side;   // P_{X_check}(chi) = u^a L_X(phi_chi)
    StackIdentity identity_unramified;   // P^ur_X(chi) = (u^a / m) L^ur_{X_check}(phi_chi)
    std::optional<DirectModel> direct;
    std::string direct_note;

    bool ok() const {
        return (!identity_stack_side.applicable || identity_stack_side.comparison.equal) &&
               (!identity_unramified.applicable || identity_unramified.comparison.equal);
    }
};

// cover_chi is the character on [T'] (base extension and base lift); its
// restriction chi = cover_chi o A is the character on [T]. The same data,
// read on X^*(T) = X_*(T_check), is the character of [T_check] for the stack
// side identity.
inline StackReport verify_stack_duality(const InducedGradedPair& p, const Curve& curve, const MonomialCharacter& cover_chi, long U,
                                        const EngineOptions& opts = {}) {
    check_field(p.isogeny, curve);
    twist_covectors(p.isogeny, cover_chi.cyclotomic_order); // MissingRoots early
    StackReport rep;
    rep.index = p.isogeny.index;
    rep.invariants = p.isogeny.invariants;
    const long a = p.base_pair.duality_exponent();
    rep.duality_exponent = a;
    const long N = cover_chi.cyclotomic_order;
    const std::size_t nv = cover_chi.nvars();
    Series shift = u_power(N, nv, delta_quarter_exponent(curve, a));

    StackIdentity& s1 = rep.identity_stack_side;
    s1.label = "stack-side";
    try {
        MonomialCharacter chi_check = cover_chi;
        MonomialCharacter pulled = chi_check.compose(p.isogeny.inclusion.transposed());
        s1.lhs = stack_automorphic_period(p, curve, chi_check, U, opts);
        s1.rhs = (shift * spectral_period(p.base_pair.side_x, curve, pulled, U - a, opts)).truncated(U);
        s1.comparison = compare_series(s1.lhs, s1.rhs, U);
    } catch (const PositivityViolation& e) {
        s1.applicable = false;
        s1.note = e.what();
        s1.witness = e.witness();
    }

    StackIdentity& s2 = rep.identity_unramified;
    s2.label = "unramified";
    MonomialCharacter chi = cover_chi.compose(p.isogeny.inclusion);
    try {
        s2.lhs = unramified_automorphic_period_liftsum(p, curve, chi, cover_chi, U, opts);
        Series lur = stack_spectral_period_unramified(p, curve, chi, cover_chi, U - a, opts);
        s2.rhs = (shift * lur).scaled(mpq_class(1) / mpq_class(p.isogeny.index)).truncated(U);
        s2.comparison = compare_series(s2.lhs, s2.rhs, U);
    } catch (const PositivityViolation& e) {
        s2.applicable = false;
        s2.note = e.what();
        s2.witness = e.witness();
    }

    try {
        rep.direct = unramified_automorphic_period_direct(p, curve, chi, cover_chi, U, opts);
    } catch (const ToricError& e) {
        rep.direct_note = e.what();
    }
    return rep;
}

} // namespace toricdual
