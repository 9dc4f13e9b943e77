#pragma once

// The base curve P^1 over F_q, its places and zeta function, unramified
// characters of split tori and the half-canonical normalization.
//
// A character of [T] = X_*(T) (genus 0) is stored as a monomial map
//   lambda -> zeta_N^(a.lambda) u^(b.lambda) z^(M lambda)
// so that specialized values z_i = zeta^k_i u^c_i and formal variables can be
// mixed coordinate by coordinate, and so that pullbacks along lattice maps and
// descents to quotients stay inside the same representation.

#include <numeric>
#include <string>
#include <vector>

#include "series.hpp"
#include "toric_duality.hpp"

namespace toricdual {

inline long mobius(long n) {
    long result = 1;
    for (long p = 2; p * p <= n; ++p) {
        if (n % p != 0) continue;
        n /= p;
        if (n % p == 0) return 0;
        result = -result;
    }
    if (n > 1) result = -result;
    return result;
}

inline bool is_prime_power(long q) {
    if (q < 2) return false;
    long p = 2;
    while (p * p <= q && q % p != 0) ++p;
    if (q % p != 0) p = q;
    while (q % p == 0) q /= p;
    return q == 1;
}

struct SpinEntry {
    std::string place;
    long degree = 1;
    long m = 0;

    bool operator==(const SpinEntry&) const = default;
};

struct Curve {
    long q = 2;
    long genus = 0;
    std::vector<SpinEntry> spin; // places with m_v != 0

    // P^1 with the half-canonical class of dx: div(dx) = -2 infinity.
    static Curve p1(long q) {
        Curve c{q, 0, {{"inf", 1, -1}}};
        c.validate();
        return c;
    }

    void validate() const {
        if (!is_prime_power(q)) throw DimensionMismatch("q = " + std::to_string(q) + " is not a prime power");
        if (genus != 0) throw DimensionMismatch("only genus 0 curves are supported");
        long total = 0;
        for (const auto& s : spin) {
            if (s.degree < 1) throw DimensionMismatch("spin place of nonpositive degree");
            total += 2 * s.m * s.degree;
        }
        if (total != 2 * genus - 2) throw DimensionMismatch("spin structure has degree " + std::to_string(total) + ", expected -2");
    }

    Int point_count(long n) const {
        Int qn;
        mpz_ui_pow_ui(qn.get_mpz_t(), static_cast<unsigned long>(q), static_cast<unsigned long>(n));
        return qn + 1;
    }

    bool operator==(const Curve&) const = default;
};

struct PlaceTable {
    std::vector<Int> counts; // counts[d - 1] = number of places of degree d

    const Int& operator[](long d) const { return counts.at(static_cast<std::size_t>(d - 1)); }
    long cutoff() const { return static_cast<long>(counts.size()); }
};

inline PlaceTable place_counts(const Curve& c, long D) {
    PlaceTable t;
    for (long d = 1; d <= D; ++d) {
        Int s = 0;
        for (long e = 1; e <= d; ++e)
            if (d % e == 0) s += mobius(e) * c.point_count(d / e);
        t.counts.push_back(s / d);
    }
    return t;
}

// prod_{d <= U} (1 - t^d)^(-a_d) as a series in the single variable t.
inline Series zeta_series(const Curve& c, long U) {
    PlaceTable places = place_counts(c, std::max(U, 1L));
    Series z = Series::one(1, 0).truncated(U);
    for (long d = 1; d <= U; ++d) {
        Series geo(1, 0, U);
        for (long k = 0; k * d <= U; ++k) geo.add_term({0, k * d, {}});
        z = z * geo.pow(places[d].get_ui());
    }
    return z;
}

// ---------------------------------------------------------------------------
// Characters

struct CharacterCoordinate {
    bool formal = true;
    long root_exponent = 0; // k_i, meaning zeta_N^k_i
    long u_exponent = 0;    // c_i

    bool operator==(const CharacterCoordinate&) const = default;
};

struct CharacterSpec {
    std::string name;
    long cyclotomic_order = 1;
    std::vector<CharacterCoordinate> coords;

    std::size_t rank() const { return coords.size(); }

    bool formal() const {
        for (const auto& c : coords)
            if (!c.formal) return false;
        return true;
    }

    static CharacterSpec make_formal(std::size_t r, std::string name = "formal") {
        return {std::move(name), 1, std::vector<CharacterCoordinate>(r)};
    }

    static CharacterSpec make_specialized(long N, const std::vector<long>& k, const std::vector<long>& c, std::string name = "") {
        if (k.size() != c.size()) throw DimensionMismatch("root and u exponents differ in length");
        CharacterSpec s{std::move(name), N, {}};
        for (std::size_t i = 0; i < k.size(); ++i) s.coords.push_back({false, mod_floor(k[i], N), c[i]});
        return s;
    }

    bool operator==(const CharacterSpec&) const = default;
};

struct MonomialCharacter {
    long cyclotomic_order = 1;
    Vec zeta; // a, read modulo N
    Vec u;    // b
    Matrix z; // nvars x rank

    std::size_t rank() const { return zeta.size(); }
    std::size_t nvars() const { return z.size(); }

    Monomial at(const Vec& lambda, long d = 1) const {
        if (lambda.size() != rank()) throw DimensionMismatch("character evaluated on a vector of the wrong rank");
        Monomial m;
        Int k = dot(zeta, lambda) * d;
        Int n = cyclotomic_order;
        Int kr;
        mpz_fdiv_r(kr.get_mpz_t(), k.get_mpz_t(), n.get_mpz_t());
        m.zeta_exp = kr.get_si();
        m.u_exp = Int(dot(u, lambda) * d).get_si();
        m.z_exp.resize(nvars());
        for (std::size_t i = 0; i < nvars(); ++i) m.z_exp[i] = Int(dot(z[i], lambda) * d).get_si();
        return m;
    }

    bool trivial_at(const Vec& lambda) const {
        Monomial m = at(lambda);
        if (m.zeta_exp != 0 || m.u_exp != 0) return false;
        for (long e : m.z_exp)
            if (e != 0) return false;
        return true;
    }

    // psi o f for a lattice map f into the character's lattice.
    MonomialCharacter compose(const LatticeMap& f) const {
        if (f.target_rank != rank()) throw DimensionMismatch("pullback along a map into the wrong lattice");
        MonomialCharacter r{cyclotomic_order, zero_vec(f.source_rank), zero_vec(f.source_rank), {}};
        for (std::size_t j = 0; j < f.source_rank; ++j) {
            Vec col(f.target_rank);
            for (std::size_t i = 0; i < f.target_rank; ++i) col[i] = f.matrix[i][j];
            r.zeta[j] = dot(zeta, col);
            r.u[j] = dot(u, col);
        }
        for (const auto& row : z) {
            Vec nr(f.source_rank);
            for (std::size_t j = 0; j < f.source_rank; ++j) {
                Int s = 0;
                for (std::size_t i = 0; i < f.target_rank; ++i) s += row[i] * f.matrix[i][j];
                nr[j] = s;
            }
            r.z.push_back(std::move(nr));
        }
        return r;
    }

    // Pointwise product with lambda -> u^(eta.lambda).
    MonomialCharacter times_u(const Vec& eta) const {
        MonomialCharacter r = *this;
        r.u = u + eta;
        return r;
    }

    // Pointwise product with lambda -> zeta^(a.lambda).
    MonomialCharacter times_zeta(const Vec& a) const {
        MonomialCharacter r = *this;
        r.zeta = zeta + a;
        return r;
    }

    // Same character read in Q(zeta_M) for a multiple M of the order.
    MonomialCharacter with_order(long M) const {
        if (M % cyclotomic_order != 0) throw MissingRoots("cyclotomic order " + std::to_string(M) + " does not contain the character's roots");
        MonomialCharacter r = *this;
        r.cyclotomic_order = M;
        for (auto& a : r.zeta) a *= M / cyclotomic_order;
        return r;
    }

    // Canonical form (zeta covector reduced mod N) for equality tests.
    MonomialCharacter reduced() const {
        MonomialCharacter r = *this;
        Int n = cyclotomic_order;
        for (auto& a : r.zeta) mpz_fdiv_r(a.get_mpz_t(), a.get_mpz_t(), n.get_mpz_t());
        return r;
    }

    bool operator==(const MonomialCharacter& o) const {
        MonomialCharacter a = reduced(), b = o.reduced();
        return a.cyclotomic_order == b.cyclotomic_order && a.zeta == b.zeta && a.u == b.u && a.z == b.z;
    }
};

// One formal variable z_i per coordinate (zero rows for specialized ones).
inline MonomialCharacter monomial_character(const CharacterSpec& chi) {
    const std::size_t r = chi.rank();
    MonomialCharacter m{chi.cyclotomic_order, zero_vec(r), zero_vec(r), zero_matrix(r, r)};
    for (std::size_t i = 0; i < r; ++i) {
        const auto& c = chi.coords[i];
        if (c.formal) {
            m.z[i][i] = 1;
        } else {
            m.zeta[i] = mod_floor(c.root_exponent, chi.cyclotomic_order);
            m.u[i] = c.u_exponent;
        }
    }
    return m;
}

inline Monomial character_monomial(const CharacterSpec& chi, const Vec& lambda, long place_degree) {
    return monomial_character(chi).at(lambda, place_degree);
}

inline Series monomial_series(const MonomialCharacter& psi, const Monomial& m) {
    return Series::monomial(psi.cyclotomic_order, m);
}

// chi(lambda(d^{-1/2})) = prod over spin places of chi at (-m_v lambda) in
// degree deg v, for lambda = num / den.
inline Monomial half_canonical_value(const Curve& curve, const MonomialCharacter& chi, const Vec& num, const Int& den = 1) {
    Monomial total{0, 0, Exponents(chi.nvars(), 0)};
    for (const auto& s : curve.spin) {
        Vec lam = scaled(num, Int(-s.m));
        // divide by den where the monomial exponents allow it
        Int k = dot(chi.zeta, lam) * s.degree, b = dot(chi.u, lam) * s.degree;
        auto divide = [&](const Int& x, const char* what) {
            if (x % den != 0)
                throw BranchAmbiguity(std::string("fractional power of ") + what + " in the normalization", to_longs(num));
            return Int(x / den).get_si();
        };
        Monomial m;
        m.zeta_exp = mod_floor(divide(k, "a root of unity"), chi.cyclotomic_order);
        m.u_exp = divide(b, "u");
        for (const auto& row : chi.z) m.z_exp.push_back(divide(dot(row, lam) * s.degree, "a formal variable"));
        total = total * m;
    }
    total.zeta_exp = mod_floor(total.zeta_exp, chi.cyclotomic_order);
    return total;
}

struct Prefactors {
    Series automorphic;    // chi(rho(d^{-1/2}))
    Series spectral;       // chi(eta_check(d^{-1/2})) u^(eps - r)
    long duality_exponent; // r - eps
};

inline Series u_power(long N, std::size_t nvars, long e) {
    return Series::monomial(N, Monomial{0, e, Exponents(nvars, 0)});
}

// Delta^{e/4} = u^{(1-g) e}
inline long delta_quarter_exponent(const Curve& c, long e) { return (1 - c.genus) * e; }

inline Prefactors normalization_prefactors(const GradedDualPair& pair, const Curve& curve, const MonomialCharacter& chi) {
    const GradedToricDatum& x = pair.side_x;
    Monomial z = half_canonical_value(curve, chi, x.rho, x.rho_den);
    Series aut = monomial_series(chi, z);
    long a = pair.duality_exponent();
    Series spec = aut * u_power(chi.cyclotomic_order, chi.nvars(), delta_quarter_exponent(curve, -a));
    return {aut, spec, a};
}

inline Prefactors normalization_prefactors(const GradedDualPair& pair, const Curve& curve, const CharacterSpec& chi) {
    return normalization_prefactors(pair, curve, monomial_character(chi));
}

} // namespace toricdual
