#pragma once

// Q(zeta_N) in the power basis 1, zeta, ..., zeta^(phi(N)-1), reduced modulo
// the N-th cyclotomic polynomial. Equality is coefficientwise, which is exact
// because the power basis is a Q-basis.

#include <cstddef>
#include <map>
#include <mutex>
#include <numeric>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "errors.hpp"

namespace toricdual {

namespace detail {

// Integer coefficients of Phi_n, lowest degree first.
inline std::vector<long> compute_cyclotomic(long n) {
    // x^n - 1 divided by Phi_d for every proper divisor d
    std::vector<long> p(static_cast<std::size_t>(n) + 1, 0);
    p[0] = -1;
    p[static_cast<std::size_t>(n)] = 1;
    for (long d = 1; d < n; ++d) {
        if (n % d != 0) continue;
        std::vector<long> f = compute_cyclotomic(d);
        // exact division of p by monic f
        std::size_t df = f.size() - 1;
        std::vector<long> quo(p.size() - df, 0);
        for (std::size_t i = p.size(); i-- > df;) {
            long c = p[i];
            quo[i - df] = c;
            for (std::size_t j = 0; j <= df; ++j) p[i - df + j] -= c * f[j];
        }
        p = std::move(quo);
    }
    return p;
}

} // namespace detail

inline const std::vector<long>& cyclotomic_polynomial(long n) {
    static std::mutex mu;
    static std::map<long, std::vector<long>> cache;
    if (n < 1) throw DimensionMismatch("cyclotomic order must be positive");
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, detail::compute_cyclotomic(n)).first;
    return it->second;
}

inline long euler_phi(long n) { return static_cast<long>(cyclotomic_polynomial(n).size()) - 1; }

inline long mod_floor(long a, long n) {
    long r = a % n;
    return r < 0 ? r + n : r;
}

class Cyclo {
public:
    Cyclo() : Cyclo(1) {}
    explicit Cyclo(long order, const mpq_class& value = 0)
        : n_(order), phi_(&cyclotomic_polynomial(order)), c_(static_cast<std::size_t>(euler_phi(order))) {
        c_[0] = value;
    }

    static Cyclo zeta_power(long order, long k) {
        Cyclo r(order);
        std::vector<mpq_class> poly(static_cast<std::size_t>(mod_floor(k, order)) + 1);
        poly.back() = 1;
        r.assign_reduced(std::move(poly));
        return r;
    }

    long order() const { return n_; }
    const std::vector<mpq_class>& coefficients() const { return c_; }

    bool is_zero() const {
        for (const auto& x : c_)
            if (x != 0) return false;
        return true;
    }

    bool is_one() const {
        if (c_[0] != 1) return false;
        for (std::size_t i = 1; i < c_.size(); ++i)
            if (c_[i] != 0) return false;
        return true;
    }

    Cyclo& operator+=(const Cyclo& o) {
        check(o);
        for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
        return *this;
    }

    Cyclo& operator-=(const Cyclo& o) {
        check(o);
        for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
        return *this;
    }

    Cyclo operator+(const Cyclo& o) const { return Cyclo(*this) += o; }
    Cyclo operator-(const Cyclo& o) const { return Cyclo(*this) -= o; }

    Cyclo operator-() const {
        Cyclo r = *this;
        for (auto& x : r.c_) x = -x;
        return r;
    }

    Cyclo operator*(const Cyclo& o) const {
        check(o);
        if (c_.size() == 1) return Cyclo(n_, c_[0] * o.c_[0]);
        std::vector<mpq_class> prod(2 * c_.size() - 1);
        for (std::size_t i = 0; i < c_.size(); ++i) {
            if (c_[i] == 0) continue;
            for (std::size_t j = 0; j < o.c_.size(); ++j)
                if (o.c_[j] != 0) prod[i + j] += c_[i] * o.c_[j];
        }
        Cyclo r(n_);
        r.assign_reduced(std::move(prod));
        return r;
    }

    Cyclo& operator*=(const Cyclo& o) { return *this = *this * o; }

    Cyclo scaled(const mpq_class& s) const {
        Cyclo r = *this;
        for (auto& x : r.c_) x *= s;
        return r;
    }

    // Multiplicative inverse by solving the linear system of multiplication
    // by *this over Q.
    Cyclo inverse() const {
        const std::size_t m = c_.size();
        std::vector<std::vector<mpq_class>> a(m, std::vector<mpq_class>(m + 1));
        // column j = (*this) * zeta^j
        for (std::size_t j = 0; j < m; ++j) {
            Cyclo col = *this * zeta_power(n_, static_cast<long>(j));
            for (std::size_t i = 0; i < m; ++i) a[i][j] = col.c_[i];
        }
        a[0][m] = 1;
        for (std::size_t c = 0; c < m; ++c) {
            std::size_t p = c;
            while (p < m && a[p][c] == 0) ++p;
            if (p == m) throw DimensionMismatch("zero has no inverse in the cyclotomic field");
            std::swap(a[c], a[p]);
            mpq_class inv = 1 / a[c][c];
            for (auto& x : a[c]) x *= inv;
            for (std::size_t i = 0; i < m; ++i) {
                if (i == c || a[i][c] == 0) continue;
                mpq_class f = a[i][c];
                for (std::size_t j = c; j <= m; ++j) a[i][j] -= f * a[c][j];
            }
        }
        Cyclo r(n_);
        for (std::size_t i = 0; i < m; ++i) r.c_[i] = a[i][m];
        return r;
    }

    bool operator==(const Cyclo& o) const { return n_ == o.n_ && c_ == o.c_; }
    bool operator!=(const Cyclo& o) const { return !(*this == o); }

    std::string to_string() const {
        std::string s;
        for (std::size_t i = 0; i < c_.size(); ++i) {
            if (c_[i] == 0) continue;
            if (!s.empty()) s += " + ";
            s += c_[i].get_str();
            if (i > 0) s += "*zeta" + std::to_string(n_) + "^" + std::to_string(i);
        }
        return s.empty() ? "0" : s;
    }

private:
    void check(const Cyclo& o) const {
        if (o.n_ != n_) throw DimensionMismatch("cyclotomic orders differ");
    }

    void assign_reduced(std::vector<mpq_class> poly) {
        const auto& phi = *phi_;
        const std::size_t deg = phi.size() - 1;
        for (std::size_t i = poly.size(); i-- > deg;) {
            if (poly[i] == 0) continue;
            mpq_class lead = poly[i];
            for (std::size_t j = 0; j <= deg; ++j) poly[i - deg + j] -= lead * phi[j];
        }
        poly.resize(deg);
        c_ = std::move(poly);
    }

    long n_;
    const std::vector<long>* phi_;
    std::vector<mpq_class> c_;
};

} // namespace toricdual
