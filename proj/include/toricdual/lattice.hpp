#pragma once

// Exact integer linear algebra on free abelian groups Z^n: Smith and Hermite
// normal forms, kernels, saturation, quotients and indices. Everything is
// carried out on GMP integers; vectors are plain std::vector<mpz_class> in
// the standard basis of Z^n.

#include <algorithm>
#include <cstddef>
#include <initializer_list>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "errors.hpp"

namespace toricdual {

using Int = mpz_class;
using Rational = mpq_class;
using Vec = std::vector<Int>;
using Matrix = std::vector<Vec>; // row-major

inline Vec vec(std::initializer_list<long> xs) {
    Vec v;
    v.reserve(xs.size());
    for (long x : xs) v.emplace_back(x);
    return v;
}

inline Vec zero_vec(std::size_t n) { return Vec(n, Int(0)); }

inline Vec unit_vec(std::size_t n, std::size_t i) {
    Vec v(n, Int(0));
    v[i] = 1;
    return v;
}

inline Matrix identity_matrix(std::size_t n) {
    Matrix m(n, Vec(n, Int(0)));
    for (std::size_t i = 0; i < n; ++i) m[i][i] = 1;
    return m;
}

inline Matrix zero_matrix(std::size_t rows, std::size_t cols) { return Matrix(rows, Vec(cols, Int(0))); }

inline std::size_t cols_of(const Matrix& m, std::size_t fallback = 0) { return m.empty() ? fallback : m.front().size(); }

inline Int dot(const Vec& a, const Vec& b) {
    if (a.size() != b.size()) throw DimensionMismatch("dot product of vectors with different lengths");
    Int s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline bool is_zero(const Vec& v) {
    return std::all_of(v.begin(), v.end(), [](const Int& x) { return x == 0; });
}

inline Vec operator+(const Vec& a, const Vec& b) {
    if (a.size() != b.size()) throw DimensionMismatch("vector sum of different lengths");
    Vec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
    return r;
}

inline Vec operator-(const Vec& a, const Vec& b) {
    if (a.size() != b.size()) throw DimensionMismatch("vector difference of different lengths");
    Vec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
    return r;
}

inline Vec operator-(const Vec& a) {
    Vec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = -a[i];
    return r;
}

inline Vec scaled(const Vec& a, const Int& s) {
    Vec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] * s;
    return r;
}

// gcd of the entries (0 for the zero vector).
inline Int content(const Vec& v) {
    Int g = 0;
    for (const auto& x : v) g = gcd(g, x);
    return g;
}

// Divides out the content; the zero vector is returned unchanged.
inline Vec primitive(Vec v) {
    Int g = content(v);
    if (g > 1)
        for (auto& x : v) x /= g;
    return v;
}

inline std::ostream& operator<<(std::ostream& os, const Vec& v) {
    os << '(';
    for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
    return os << ')';
}

inline std::string str(const Vec& v) {
    std::string s = "(";
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + v[i].get_str();
    return s + ")";
}

inline std::vector<long> to_longs(const Vec& v) {
    std::vector<long> out;
    out.reserve(v.size());
    for (const auto& x : v) out.push_back(x.get_si());
    return out;
}

inline Matrix transpose(const Matrix& m, std::size_t cols_if_empty = 0) {
    std::size_t rows = m.size(), cols = cols_of(m, cols_if_empty);
    Matrix t(cols, Vec(rows));
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) t[j][i] = m[i][j];
    return t;
}

inline Matrix multiply(const Matrix& a, const Matrix& b) {
    if (a.empty()) return {};
    std::size_t inner = a.front().size();
    if (b.size() != inner) throw DimensionMismatch("matrix product with incompatible shapes");
    std::size_t cols = cols_of(b);
    Matrix r(a.size(), Vec(cols, Int(0)));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t k = 0; k < inner; ++k) {
            if (a[i][k] == 0) continue;
            for (std::size_t j = 0; j < cols; ++j) r[i][j] += a[i][k] * b[k][j];
        }
    return r;
}

inline Vec mat_vec(const Matrix& m, const Vec& x) {
    Vec r(m.size(), Int(0));
    for (std::size_t i = 0; i < m.size(); ++i) r[i] = dot(m[i], x);
    return r;
}

// Bareiss fraction-free elimination.
inline Int determinant(Matrix m) {
    std::size_t n = m.size();
    if (n == 0) return 1;
    if (m.front().size() != n) throw DimensionMismatch("determinant of a non-square matrix");
    Int sign = 1, prev = 1;
    for (std::size_t k = 0; k < n; ++k) {
        if (m[k][k] == 0) {
            std::size_t p = k + 1;
            while (p < n && m[p][k] == 0) ++p;
            if (p == n) return 0;
            std::swap(m[k], m[p]);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i)
            for (std::size_t j = k + 1; j < n; ++j) {
                m[i][j] = m[i][j] * m[k][k] - m[i][k] * m[k][j];
                mpz_divexact(m[i][j].get_mpz_t(), m[i][j].get_mpz_t(), prev.get_mpz_t());
            }
        prev = m[k][k];
    }
    return sign * m[n - 1][n - 1];
}

inline std::size_t rank(Matrix m) {
    std::size_t rows = m.size();
    if (rows == 0) return 0;
    std::size_t cols = m.front().size(), r = 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        std::size_t p = r;
        while (p < rows && m[p][c] == 0) ++p;
        if (p == rows) continue;
        std::swap(m[r], m[p]);
        for (std::size_t i = r + 1; i < rows; ++i) {
            if (m[i][c] == 0) continue;
            Int a = m[r][c], b = m[i][c];
            for (std::size_t j = c; j < cols; ++j) m[i][j] = m[i][j] * a - m[r][j] * b;
            m[i] = primitive(m[i]);
        }
        ++r;
    }
    return r;
}

// ---------------------------------------------------------------------------
// Smith normal form

struct SmithDecomposition {
    Matrix left;         // rows x rows, unimodular
    std::vector<Int> diag; // min(rows, cols) entries, d_1 | d_2 | ...
    Matrix right;        // cols x cols, unimodular
};

namespace detail {

inline void row_add(Matrix& m, std::size_t dst, std::size_t src, const Int& f) {
    for (std::size_t j = 0; j < m[dst].size(); ++j) m[dst][j] += f * m[src][j];
}

inline void col_add(Matrix& m, std::size_t dst, std::size_t src, const Int& f) {
    for (auto& row : m) row[dst] += f * row[src];
}

inline void col_swap(Matrix& m, std::size_t a, std::size_t b) {
    for (auto& row : m) std::swap(row[a], row[b]);
}

inline void col_negate(Matrix& m, std::size_t c) {
    for (auto& row : m) row[c] = -row[c];
}

} // namespace detail

// left * m * right == diag(d_1, ..., d_k) with d_i >= 0 and d_i | d_{i+1}.
inline SmithDecomposition smith_normal_form(const Matrix& m, std::size_t cols_if_empty = 0) {
    const std::size_t rows = m.size();
    const std::size_t cols = cols_of(m, cols_if_empty);
    Matrix a = m;
    Matrix left = identity_matrix(rows);
    Matrix right = identity_matrix(cols);
    const std::size_t k = std::min(rows, cols);

    for (std::size_t t = 0; t < k; ++t) {
        for (;;) {
            // smallest nonzero entry of the trailing block becomes the pivot
            std::size_t pr = rows, pc = cols;
            for (std::size_t i = t; i < rows; ++i)
                for (std::size_t j = t; j < cols; ++j)
                    if (a[i][j] != 0 && (pr == rows || abs(a[i][j]) < abs(a[pr][pc]))) {
                        pr = i;
                        pc = j;
                    }
            if (pr == rows) break; // block is zero
            std::swap(a[t], a[pr]);
            std::swap(left[t], left[pr]);
            detail::col_swap(a, t, pc);
            detail::col_swap(right, t, pc);

            bool clean = true;
            for (std::size_t i = t + 1; i < rows; ++i) {
                if (a[i][t] == 0) continue;
                Int q;
                mpz_fdiv_q(q.get_mpz_t(), a[i][t].get_mpz_t(), a[t][t].get_mpz_t());
                detail::row_add(a, i, t, -q);
                detail::row_add(left, i, t, -q);
                if (a[i][t] != 0) clean = false;
            }
            for (std::size_t j = t + 1; j < cols; ++j) {
                if (a[t][j] == 0) continue;
                Int q;
                mpz_fdiv_q(q.get_mpz_t(), a[t][j].get_mpz_t(), a[t][t].get_mpz_t());
                detail::col_add(a, j, t, -q);
                detail::col_add(right, j, t, -q);
                if (a[t][j] != 0) clean = false;
            }
            if (!clean) continue;

            // divisibility: fold any offending row into row t and retry
            std::size_t bad = rows;
            for (std::size_t i = t + 1; i < rows && bad == rows; ++i)
                for (std::size_t j = t + 1; j < cols; ++j)
                    if (a[i][j] % a[t][t] != 0) {
                        bad = i;
                        break;
                    }
            if (bad == rows) break;
            detail::row_add(a, t, bad, Int(1));
            detail::row_add(left, t, bad, Int(1));
        }
        if (a[t][t] < 0) {
            a[t] = -a[t];
            left[t] = -left[t];
        }
    }

    SmithDecomposition out;
    out.diag.reserve(k);
    for (std::size_t i = 0; i < k; ++i) out.diag.push_back(a[i][i]);
    out.left = std::move(left);
    out.right = std::move(right);
    return out;
}

// Inverse of a unimodular integer matrix (Gauss-Jordan over Q).
inline Matrix inverse_unimodular(const Matrix& m) {
    const std::size_t n = m.size();
    std::vector<std::vector<Rational>> a(n, std::vector<Rational>(2 * n));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) a[i][j] = m[i][j];
        a[i][n + i] = 1;
    }
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        while (p < n && a[p][c] == 0) ++p;
        if (p == n) throw DimensionMismatch("matrix is singular");
        std::swap(a[c], a[p]);
        Rational inv = 1 / a[c][c];
        for (auto& x : a[c]) x *= inv;
        for (std::size_t i = 0; i < n; ++i) {
            if (i == c || a[i][c] == 0) continue;
            Rational f = a[i][c];
            for (std::size_t j = 0; j < 2 * n; ++j) a[i][j] -= f * a[c][j];
        }
    }
    Matrix inv(n, Vec(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            const Rational& x = a[i][n + j];
            if (x.get_den() != 1) throw DimensionMismatch("matrix is not unimodular");
            inv[i][j] = x.get_num();
        }
    return inv;
}

// Row-style Hermite normal form of the lattice spanned by the rows: echelon
// form with positive pivots, entries above a pivot reduced into [0, pivot).
// Zero rows are dropped, so the result is a canonical basis of the span.
inline Matrix hermite_normal_form(Matrix m) {
    if (m.empty()) return m;
    const std::size_t cols = m.front().size();
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < m.size(); ++c) {
        for (;;) {
            std::size_t p = m.size();
            for (std::size_t i = r; i < m.size(); ++i)
                if (m[i][c] != 0 && (p == m.size() || abs(m[i][c]) < abs(m[p][c]))) p = i;
            if (p == m.size()) break;
            std::swap(m[r], m[p]);
            bool done = true;
            for (std::size_t i = r + 1; i < m.size(); ++i) {
                if (m[i][c] == 0) continue;
                Int q;
                mpz_fdiv_q(q.get_mpz_t(), m[i][c].get_mpz_t(), m[r][c].get_mpz_t());
                detail::row_add(m, i, r, -q);
                if (m[i][c] != 0) done = false;
            }
            if (done) break;
        }
        if (r < m.size() && m[r][c] != 0) {
            if (m[r][c] < 0) m[r] = -m[r];
            for (std::size_t i = 0; i < r; ++i) {
                Int q;
                mpz_fdiv_q(q.get_mpz_t(), m[i][c].get_mpz_t(), m[r][c].get_mpz_t());
                detail::row_add(m, i, r, -q);
            }
            ++r;
        }
    }
    m.resize(r);
    return m;
}

// Saturated basis of {x in Z^n : rows . x = 0}.
inline Matrix kernel_basis(const Matrix& rows, std::size_t n) {
    if (rows.empty()) return identity_matrix(n);
    SmithDecomposition s = smith_normal_form(rows, n);
    std::size_t rk = 0;
    for (const auto& d : s.diag)
        if (d != 0) ++rk;
    Matrix basis;
    for (std::size_t j = rk; j < n; ++j) {
        Vec col(n);
        for (std::size_t i = 0; i < n; ++i) col[i] = s.right[i][j];
        basis.push_back(std::move(col));
    }
    return hermite_normal_form(basis);
}

// Basis of (Q-span of gens) intersected with Z^n, in Hermite normal form.
inline Matrix saturate_sublattice(const Matrix& gens, std::size_t n) {
    for (const auto& g : gens)
        if (g.size() != n) throw DimensionMismatch("generator has the wrong length");
    if (gens.empty()) return {};
    Matrix perp = kernel_basis(gens, n);
    if (perp.empty()) return identity_matrix(n);
    return kernel_basis(perp, n);
}

// ---------------------------------------------------------------------------
// Lattice maps and quotients

struct LatticeMap {
    std::size_t source_rank = 0;
    std::size_t target_rank = 0;
    Matrix matrix; // target_rank x source_rank; column j is the image of e_j

    static LatticeMap identity(std::size_t n) { return {n, n, identity_matrix(n)}; }

    static LatticeMap from_columns(const Matrix& columns, std::size_t target_rank) {
        LatticeMap f{columns.size(), target_rank, zero_matrix(target_rank, columns.size())};
        for (std::size_t j = 0; j < columns.size(); ++j) {
            if (columns[j].size() != target_rank) throw DimensionMismatch("column has the wrong length");
            for (std::size_t i = 0; i < target_rank; ++i) f.matrix[i][j] = columns[j][i];
        }
        return f;
    }

    Vec operator()(const Vec& x) const {
        if (x.size() != source_rank) throw DimensionMismatch("lattice map applied to a vector of the wrong rank");
        Vec r(target_rank, Int(0));
        for (std::size_t i = 0; i < target_rank; ++i)
            for (std::size_t j = 0; j < source_rank; ++j) r[i] += matrix[i][j] * x[j];
        return r;
    }

    // Dual map on characters: the transpose.
    LatticeMap transposed() const { return {target_rank, source_rank, transpose(matrix, source_rank)}; }

    bool operator==(const LatticeMap&) const = default;
};

// (g o f)
inline LatticeMap compose(const LatticeMap& g, const LatticeMap& f) {
    if (g.source_rank != f.target_rank) throw DimensionMismatch("composition of incompatible lattice maps");
    LatticeMap r{f.source_rank, g.target_rank, zero_matrix(g.target_rank, f.source_rank)};
    for (std::size_t i = 0; i < g.target_rank; ++i)
        for (std::size_t k = 0; k < g.source_rank; ++k) {
            if (g.matrix[i][k] == 0) continue;
            for (std::size_t j = 0; j < f.source_rank; ++j) r.matrix[i][j] += g.matrix[i][k] * f.matrix[k][j];
        }
    return r;
}

struct QuotientData {
    LatticeMap free_projection;       // Z^n -> Z^(n - rank(sub)), surjective
    LatticeMap section;               // right inverse of free_projection
    std::vector<Int> torsion_invariants; // elementary divisors > 1
    Matrix torsion_projection;        // row i gives the Z/d_i coordinate (before reduction)
};

// Z^n / span(sub_basis) split into a free part and torsion coordinates via
// the Smith decomposition of the generator matrix.
inline QuotientData quotient_lattice(std::size_t n, const Matrix& sub_basis) {
    for (const auto& g : sub_basis)
        if (g.size() != n) throw DimensionMismatch("sublattice vector has the wrong length");
    QuotientData q;
    if (sub_basis.empty()) {
        q.free_projection = LatticeMap::identity(n);
        q.section = LatticeMap::identity(n);
        return q;
    }
    SmithDecomposition s = smith_normal_form(sub_basis, n);
    std::size_t rk = 0;
    for (const auto& d : s.diag)
        if (d != 0) ++rk;
    // coordinates c = right^T x with respect to the basis given by rows of right^{-1}
    Matrix rt = transpose(s.right);
    Matrix rinv = inverse_unimodular(s.right);
    q.free_projection = {n, n - rk, Matrix(rt.begin() + static_cast<long>(rk), rt.end())};
    q.section = {n - rk, n, zero_matrix(n, n - rk)};
    for (std::size_t j = rk; j < n; ++j)
        for (std::size_t i = 0; i < n; ++i) q.section.matrix[i][j - rk] = rinv[j][i];
    for (std::size_t i = 0; i < rk; ++i)
        if (s.diag[i] > 1) {
            q.torsion_invariants.push_back(s.diag[i]);
            q.torsion_projection.push_back(rt[i]);
        }
    return q;
}

// Index of the image of a full-rank map between lattices of equal rank;
// nullopt stands for an infinite index.
inline std::optional<Int> lattice_index(const LatticeMap& sub) {
    if (sub.source_rank != sub.target_rank) return std::nullopt;
    Int d = determinant(sub.matrix);
    if (d == 0) return std::nullopt;
    return abs(d);
}

} // namespace toricdual
