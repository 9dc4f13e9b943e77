#pragma once

// Truncated Laurent series in u whose coefficients are Laurent polynomials in
// formal variables z_1..z_k over Q(zeta_N).

#include <algorithm>
#include <climits>
#include <cstddef>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "cyclotomic.hpp"

namespace toricdual {

using Exponents = std::vector<long>;

// zeta^zeta_exp * u^u_exp * z^z_exp
struct Monomial {
    long zeta_exp = 0;
    long u_exp = 0;
    Exponents z_exp;

    Monomial operator*(const Monomial& o) const {
        if (z_exp.size() != o.z_exp.size()) throw DimensionMismatch("monomials in different variable sets");
        Monomial r{zeta_exp + o.zeta_exp, u_exp + o.u_exp, z_exp};
        for (std::size_t i = 0; i < z_exp.size(); ++i) r.z_exp[i] += o.z_exp[i];
        return r;
    }

    Monomial pow(long e) const {
        Monomial r{zeta_exp * e, u_exp * e, z_exp};
        for (auto& x : r.z_exp) x *= e;
        return r;
    }

    bool operator==(const Monomial&) const = default;
};

// Laurent polynomial in z with cyclotomic coefficients.
class ZPoly {
public:
    ZPoly() = default;
    ZPoly(long order, std::size_t nvars) : n_(order), nvars_(nvars) {}

    static ZPoly term(long order, const Exponents& z, const Cyclo& c) {
        ZPoly p(order, z.size());
        if (!c.is_zero()) p.terms_.emplace(z, c);
        return p;
    }

    long order() const { return n_; }
    std::size_t nvars() const { return nvars_; }
    bool is_zero() const { return terms_.empty(); }
    const std::map<Exponents, Cyclo>& terms() const { return terms_; }

    void add_term(const Exponents& z, const Cyclo& c) {
        if (c.is_zero()) return;
        auto [it, fresh] = terms_.try_emplace(z, c);
        if (!fresh) {
            it->second += c;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }

    ZPoly& operator+=(const ZPoly& o) {
        for (const auto& [z, c] : o.terms_) add_term(z, c);
        return *this;
    }

    ZPoly& operator-=(const ZPoly& o) {
        for (const auto& [z, c] : o.terms_) add_term(z, -c);
        return *this;
    }

    ZPoly operator*(const ZPoly& o) const {
        ZPoly r(n_, nvars_);
        Exponents z(nvars_);
        for (const auto& [za, ca] : terms_)
            for (const auto& [zb, cb] : o.terms_) {
                for (std::size_t i = 0; i < nvars_; ++i) z[i] = za[i] + zb[i];
                r.add_term(z, ca * cb);
            }
        return r;
    }

    ZPoly scaled(const Cyclo& s) const {
        ZPoly r(n_, nvars_);
        for (const auto& [z, c] : terms_) r.add_term(z, c * s);
        return r;
    }

    bool operator==(const ZPoly& o) const { return terms_ == o.terms_; }

private:
    long n_ = 1;
    std::size_t nvars_ = 0;
    std::map<Exponents, Cyclo> terms_;
};

class Series {
public:
    // Order used for series that are known exactly (finite sums).
    static constexpr long kExact = LONG_MAX / 4;

    Series() = default;
    Series(long cyclotomic_order, std::size_t nvars, long order = kExact)
        : n_(cyclotomic_order), nvars_(nvars), order_(order) {}

    static Series one(long cyclotomic_order, std::size_t nvars) {
        return monomial(cyclotomic_order, Monomial{0, 0, Exponents(nvars, 0)});
    }

    static Series monomial(long cyclotomic_order, const Monomial& m, const mpq_class& coeff = 1) {
        Series s(cyclotomic_order, m.z_exp.size());
        s.add_term(m, coeff);
        return s;
    }

    long cyclotomic_order() const { return n_; }
    std::size_t nvars() const { return nvars_; }
    long order() const { return order_; }
    bool exact() const { return order_ >= kExact; }
    const std::map<long, ZPoly>& coefficients() const { return coeffs_; }

    bool is_zero() const { return coeffs_.empty(); }

    // Smallest u-exponent carrying a nonzero coefficient; one past the order
    // for a series with no known nonzero term.
    long low() const { return coeffs_.empty() ? (exact() ? kExact : order_ + 1) : coeffs_.begin()->first; }

    ZPoly coefficient(long u_exp) const {
        auto it = coeffs_.find(u_exp);
        return it == coeffs_.end() ? ZPoly(n_, nvars_) : it->second;
    }

    void add_term(const Monomial& m, const mpq_class& coeff = 1) {
        if (m.z_exp.size() != nvars_) throw DimensionMismatch("monomial has the wrong number of variables");
        if (m.u_exp > order_ || coeff == 0) return;
        add_poly(m.u_exp, ZPoly::term(n_, m.z_exp, Cyclo::zeta_power(n_, m.zeta_exp).scaled(coeff)));
    }

    void add_poly(long u_exp, const ZPoly& p) {
        if (u_exp > order_ || p.is_zero()) return;
        auto [it, fresh] = coeffs_.try_emplace(u_exp, p);
        if (!fresh) {
            it->second += p;
            if (it->second.is_zero()) coeffs_.erase(it);
        }
    }

    Series truncated(long order) const {
        Series r(n_, nvars_, std::min(order, order_));
        for (const auto& [e, p] : coeffs_)
            if (e <= r.order_) r.coeffs_.emplace(e, p);
        return r;
    }

    Series operator+(const Series& o) const {
        check(o);
        Series r = truncated(std::min(order_, o.order_));
        for (const auto& [e, p] : o.coeffs_) r.add_poly(e, p);
        return r;
    }

    Series operator-(const Series& o) const {
        check(o);
        Series r = truncated(std::min(order_, o.order_));
        for (const auto& [e, p] : o.coeffs_) {
            ZPoly neg(n_, nvars_);
            neg -= p;
            r.add_poly(e, neg);
        }
        return r;
    }

    Series operator*(const Series& o) const {
        check(o);
        long ord = std::min(sat_add(order_, o.low()), sat_add(o.order_, low()));
        Series r(n_, nvars_, std::min(ord, kExact));
        for (const auto& [ea, pa] : coeffs_) {
            for (const auto& [eb, pb] : o.coeffs_) {
                if (ea + eb > r.order_) break;
                r.add_poly(ea + eb, pa * pb);
            }
        }
        return r;
    }

    Series& operator*=(const Series& o) { return *this = *this * o; }

    Series scaled(const mpq_class& s) const {
        Series r(n_, nvars_, order_);
        if (s == 0) return r;
        for (const auto& [e, p] : coeffs_) r.coeffs_.emplace(e, p.scaled(Cyclo(n_, s)));
        return r;
    }

    // Binary powering, truncating every intermediate product.
    Series pow(unsigned long e) const {
        if (e == 0) return one(n_, nvars_);
        Series base = *this;
        Series result;
        bool have = false;
        while (e > 0) {
            if (e & 1UL) {
                result = have ? result * base : base;
                have = true;
            }
            e >>= 1UL;
            if (e > 0) base = base * base;
        }
        return result;
    }

    // Inverse of a series whose lowest coefficient is a single z-monomial
    // with invertible cyclotomic coefficient; valid up to the same relative
    // precision.
    Series reciprocal() const {
        if (coeffs_.empty()) throw DimensionMismatch("reciprocal of the zero series");
        const long lo = low();
        const ZPoly& lead = coeffs_.begin()->second;
        if (lead.terms().size() != 1) throw DimensionMismatch("lowest coefficient is not a unit");
        const auto& [lz, lc] = *lead.terms().begin();
        Exponents inv_z(lz.size());
        for (std::size_t i = 0; i < lz.size(); ++i) inv_z[i] = -lz[i];
        ZPoly lead_inv = ZPoly::term(n_, inv_z, lc.inverse());

        // normalize: s = lead * u^lo * (1 + t), t of positive u-order
        const long rel = exact() ? kExact : order_ - lo;
        Series t(n_, nvars_, rel);
        for (const auto& [e, p] : coeffs_)
            if (e > lo) t.add_poly(e - lo, p * lead_inv);
        if (t.is_zero() && exact()) {
            Series r(n_, nvars_);
            r.add_poly(-lo, lead_inv);
            return r;
        }
        // (1 + t)^{-1} = sum (-t)^k, finitely many terms below rel
        Series inv = one(n_, nvars_).truncated(rel);
        Series power = one(n_, nvars_).truncated(rel);
        Series neg_t = t.scaled(-1);
        for (long k = 1; k <= rel; ++k) {
            power = power * neg_t;
            if (power.is_zero()) break;
            inv = inv + power;
        }
        Series r(n_, nvars_, rel == kExact ? kExact : rel - lo);
        for (const auto& [e, p] : inv.coeffs_) r.add_poly(e - lo, p * lead_inv);
        return r;
    }

    // (z, u) -> (z^d, u^d); zeta powers are left alone.
    Series substitute_power(long d) const {
        Series r(n_, nvars_, exact() ? kExact : order_ * d);
        for (const auto& [e, p] : coeffs_) {
            ZPoly q(n_, nvars_);
            for (const auto& [z, c] : p.terms()) {
                Exponents zd = z;
                for (auto& x : zd) x *= d;
                q.add_term(zd, c);
            }
            r.add_poly(e * d, q);
        }
        return r;
    }

    // Equality of the coefficients both series know about.
    bool agrees_with(const Series& o) const { return first_mismatch(o) == kExact; }

    // Smallest u-exponent at which the known coefficients differ, kExact if
    // none do.
    long first_mismatch(const Series& o) const {
        check(o);
        long upto = std::min(order_, o.order_);
        auto a = coeffs_.begin();
        auto b = o.coeffs_.begin();
        for (;;) {
            long ea = a == coeffs_.end() ? kExact : a->first;
            long eb = b == o.coeffs_.end() ? kExact : b->first;
            long e = std::min(ea, eb);
            if (e > upto || e >= kExact) return kExact;
            if (ea != eb) return e;
            if (!(a->second == b->second)) return e;
            ++a;
            ++b;
        }
    }

    bool operator==(const Series& o) const {
        return n_ == o.n_ && nvars_ == o.nvars_ && order_ == o.order_ && coeffs_ == o.coeffs_;
    }

    std::string to_string() const;

private:
    static long sat_add(long a, long b) {
        if (a >= kExact || b >= kExact) return kExact;
        return a + b;
    }

    void check(const Series& o) const {
        if (n_ != o.n_ || nvars_ != o.nvars_) throw DimensionMismatch("series over different coefficient rings");
    }

    long n_ = 1;
    std::size_t nvars_ = 0;
    long order_ = kExact;
    std::map<long, ZPoly> coeffs_;
};

inline std::string Series::to_string() const {
    std::string s;
    for (const auto& [e, p] : coeffs_) {
        for (const auto& [z, c] : p.terms()) {
            if (!s.empty()) s += " + ";
            s += "(" + c.to_string() + ")";
            for (std::size_t i = 0; i < z.size(); ++i)
                if (z[i] != 0) s += "*z" + std::to_string(i + 1) + "^" + std::to_string(z[i]);
            if (e != 0) s += "*u^" + std::to_string(e);
        }
    }
    if (s.empty()) s = "0";
    if (!exact()) s += " + O(u^" + std::to_string(order_ + 1) + ")";
    return s;
}

} // namespace toricdual
