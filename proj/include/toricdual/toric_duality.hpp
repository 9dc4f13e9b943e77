#pragma once

// Graded toric data (T, X = Spec Z[sigma^v cap X^*(T)], rho, eta), toric dual
// pairs and the orbit/face correspondence.

#include <string>
#include <utility>
#include <vector>

#include "cone.hpp"

namespace toricdual {

struct GradedToricDatum {
    std::size_t rank = 0;
    Cone sigma;          // in X_*(T)
    Vec rho;             // numerator of the grading cocharacter
    Int rho_den = 1;     // > 1 only for stack-induced data
    Vec eta;             // eigenform character in X^*(T)
    bool stack_induced = false;

    bool operator==(const GradedToricDatum&) const = default;
};

struct GradedDualPair {
    GradedToricDatum side_x;
    GradedToricDatum side_xcheck;
    Int epsilon;

    // r - epsilon: the exponent a in P = u^a L at genus 0
    long duality_exponent() const { return static_cast<long>(side_x.rank) - epsilon.get_si(); }

    GradedDualPair swapped() const { return {side_xcheck, side_x, epsilon}; }
};

inline GradedToricDatum make_datum(const Matrix& rays, const Vec& rho, const Vec& eta) {
    if (rays.empty()) throw DimensionMismatch("a datum needs at least one ray");
    const std::size_t r = rays.front().size();
    if (rho.size() != r || eta.size() != r) throw DimensionMismatch("grading data has the wrong rank");
    return {r, make_cone(rays, r), rho, 1, eta, false};
}

inline void check_datum(const GradedToricDatum& d) {
    if (d.sigma.ambient_rank != d.rank || d.rho.size() != d.rank || d.eta.size() != d.rank)
        throw DimensionMismatch("datum components have inconsistent ranks");
    if (!d.sigma.strongly_convex()) throw NotStronglyConvex("cone contains a line", to_longs(d.sigma.lineality.front()));
    if (!d.sigma.full_dimensional())
        throw InvalidGrading("cone is not full-dimensional", to_longs(d.sigma.equations.front()));
    if (d.rho_den != 1 && !d.stack_induced) throw InvalidGrading("a rational grading needs a stack-induced datum");
    if (d.rho_den < 1) throw InvalidGrading("grading denominator must be positive");
    for (const auto& f : d.sigma.facets)
        if (dot(f, d.rho) <= 0) throw InvalidGrading("grading is not interior to the cone", to_longs(f));
    for (const auto& r : d.sigma.rays)
        if (dot(d.eta, r) < 1) throw InvalidEigenform("eigenform has a pole along a ray", to_longs(r));
}

inline GradedDualPair toric_dual(const GradedToricDatum& d) {
    check_datum(d);
    if (d.rho_den != 1) throw InvalidGrading("toric dual of a rational grading is taken on the covering datum");
    GradedToricDatum dual{d.rank, dual_cone(d.sigma), d.eta, 1, d.rho, false};
    return {d, dual, dot(d.rho, d.eta)};
}

// ---------------------------------------------------------------------------
// Validation report: the three equivalent conditions on each side plus the
// pairing invariants.

struct ValidationEntry {
    std::string side;      // "X" or "Xcheck" or "pair"
    std::string condition; // interior_grading, finite_levels, eigenform_pole_free, ...
    bool passed = true;
    std::vector<long> witness;
    std::string detail;
};

struct ValidationReport {
    std::vector<ValidationEntry> entries;
    bool ok() const {
        for (const auto& e : entries)
            if (!e.passed) return false;
        return true;
    }
};

namespace detail {

inline void validate_side(const GradedToricDatum& d, const std::string& side, ValidationReport& rep) {
    ValidationEntry interior{side, "interior_grading", true, {}, ""};
    ValidationEntry levels{side, "finite_levels", true, {}, ""};
    if (!d.sigma.full_dimensional()) {
        interior.passed = levels.passed = false;
        interior.witness = levels.witness = to_longs(d.sigma.equations.front());
        interior.detail = levels.detail = "cone is not full-dimensional";
    } else {
        // rho interior to sigma iff rho pairs positively with every ray of
        // the dual cone, iff every level set of <rho, .> on the dual monoid
        // is finite and sits in nonnegative degree
        for (const auto& f : d.sigma.facets) {
            Int p = dot(f, d.rho);
            if (p <= 0) {
                if (interior.passed) {
                    interior.passed = false;
                    interior.witness = to_longs(f);
                    interior.detail = "dual-cone vector pairs to " + p.get_str() + " with the grading";
                }
                if (levels.passed) {
                    levels.passed = false;
                    levels.witness = to_longs(f);
                    levels.detail = p == 0 ? "weight-0 piece contains a whole ray" : "negative weights occur";
                }
            }
        }
    }
    ValidationEntry eigen{side, "eigenform_pole_free", true, {}, ""};
    for (const auto& r : d.sigma.rays) {
        Int p = dot(d.eta, r);
        if (p < 1) {
            eigen.passed = false;
            eigen.witness = to_longs(r);
            eigen.detail = "eigenform pairs to " + p.get_str() + " with a ray";
            break;
        }
    }
    rep.entries.push_back(interior);
    rep.entries.push_back(levels);
    rep.entries.push_back(eigen);
}

} // namespace detail

inline ValidationReport validate_pair(const GradedDualPair& pair) {
    ValidationReport rep;
    detail::validate_side(pair.side_x, "X", rep);
    detail::validate_side(pair.side_xcheck, "Xcheck", rep);
    rep.entries.push_back({"pair", "dual_cones", pair.side_xcheck.sigma == dual_cone(pair.side_x.sigma), {}, ""});
    rep.entries.push_back(
        {"pair", "roles_swapped", pair.side_xcheck.rho == pair.side_x.eta && pair.side_xcheck.eta == pair.side_x.rho, {}, ""});
    Int eps = dot(pair.side_x.rho, pair.side_x.eta);
    rep.entries.push_back({"pair", "epsilon_positive", eps > 0 && eps == pair.epsilon, {}, "epsilon = " + pair.epsilon.get_str()});
    return rep;
}

// Pair assembled without the datum checks so that validate_pair can report
// on bad input.
inline GradedDualPair unchecked_pair(const GradedToricDatum& d) {
    GradedToricDatum dual{d.rank, dual_cone(d.sigma), d.eta, 1, d.rho, false};
    return {d, dual, dot(d.rho, d.eta)};
}

// ---------------------------------------------------------------------------
// Orbits

struct OrbitDescriptor {
    Cone face;
    Matrix stabilizer_basis; // saturated basis of X_*(S_tau)
    QuotientData quotient;   // X_*(K_tau) = X_*(T) / X_*(S_tau)
    Cone closure_cone;       // image of sigma in X_*(K_tau)
    Cone sigma;              // the cone whose face this is
};

inline OrbitDescriptor orbit_of_face(const Cone& face, const Cone& sigma) {
    OrbitDescriptor o;
    o.face = face;
    o.sigma = sigma;
    o.stabilizer_basis = saturate_sublattice(face.rays, sigma.ambient_rank);
    o.quotient = quotient_lattice(sigma.ambient_rank, o.stabilizer_basis);
    o.closure_cone = image_cone(sigma, o.quotient.free_projection);
    return o;
}

inline std::vector<OrbitDescriptor> orbits(const GradedToricDatum& d) {
    std::vector<OrbitDescriptor> out;
    for (const auto& f : faces(d.sigma).faces) out.push_back(orbit_of_face(f, d.sigma));
    return out;
}

// tau -> tau^perp cap sigma^v, as an orbit of the other side. An orbit of
// side_x goes to side_xcheck; an orbit of side_xcheck comes back.
inline OrbitDescriptor dual_orbit(const OrbitDescriptor& o, const GradedDualPair& pair) {
    if (o.sigma == pair.side_x.sigma)
        return orbit_of_face(face_dual(o.face, pair.side_x.sigma), pair.side_xcheck.sigma);
    return orbit_of_face(face_dual(o.face, pair.side_xcheck.sigma), pair.side_x.sigma);
}

} // namespace toricdual
