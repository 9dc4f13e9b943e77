#pragma once

// Rational polyhedral cones in Z^n, held in both descriptions:
//   C = cone(rays) + span(lineality) = {x : f.x >= 0 (f in facets), e.x = 0 (e in equations)}.
// Rays are stored modulo the lineality space and facets modulo the equations,
// each projected orthogonally and scaled to a primitive integer vector, so two
// equal cones have equal representations.

#include <algorithm>
#include <cstddef>
#include <functional>
#include <map>
#include <set>
#include <utility>
#include <vector>

#include "lattice.hpp"

namespace toricdual {

struct Cone {
    std::size_t ambient_rank = 0;
    Matrix rays;
    Matrix lineality;
    Matrix facets;
    Matrix equations;

    bool strongly_convex() const { return lineality.empty(); }
    bool full_dimensional() const { return equations.empty(); }
    std::size_t dim() const { return ambient_rank - equations.size(); }

    bool operator==(const Cone&) const = default;
};

namespace detail {

// Integer vector proportional to the orthogonal projection of v onto the
// complement of span(basis); primitive.
inline Vec project_away(const Vec& v, const Matrix& basis) {
    if (basis.empty()) return primitive(v);
    const std::size_t k = basis.size(), n = v.size();
    // Gram system G c = B v
    std::vector<std::vector<Rational>> a(k, std::vector<Rational>(k + 1));
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j < k; ++j) a[i][j] = dot(basis[i], basis[j]);
        a[i][k] = dot(basis[i], v);
    }
    for (std::size_t c = 0; c < k; ++c) {
        std::size_t p = c;
        while (a[p][c] == 0) ++p;
        std::swap(a[c], a[p]);
        Rational inv = 1 / a[c][c];
        for (auto& x : a[c]) x *= inv;
        for (std::size_t i = 0; i < k; ++i) {
            if (i == c || a[i][c] == 0) continue;
            Rational f = a[i][c];
            for (std::size_t j = c; j <= k; ++j) a[i][j] -= f * a[c][j];
        }
    }
    std::vector<Rational> x(n);
    for (std::size_t j = 0; j < n; ++j) {
        x[j] = v[j];
        for (std::size_t i = 0; i < k; ++i) x[j] -= a[i][k] * basis[i][j];
    }
    Int den = 1;
    for (const auto& r : x) den = lcm(den, Int(r.get_den()));
    Vec out(n);
    for (std::size_t j = 0; j < n; ++j) out[j] = Int(x[j] * den);
    return primitive(out);
}

inline Matrix canonical_generators(const Matrix& gens, const Matrix& modulo) {
    std::set<Vec> seen;
    for (const auto& g : gens) {
        Vec p = project_away(g, modulo);
        if (!is_zero(p)) seen.insert(std::move(p));
    }
    return Matrix(seen.begin(), seen.end());
}

struct DDResult {
    Matrix lineality;
    Matrix rays;
};

// Incremental double description of {y in R^n : a.y >= 0 for every row a}.
inline DDResult double_description(const Matrix& ineqs, std::size_t n) {
    Matrix lin = identity_matrix(n);
    Matrix rays;
    Matrix processed;

    auto tight_rank = [&](const std::vector<const Vec*>& pts) {
        Matrix rows;
        for (const auto& b : processed) {
            bool tight = true;
            for (const Vec* p : pts)
                if (dot(b, *p) != 0) {
                    tight = false;
                    break;
                }
            if (tight) rows.push_back(b);
        }
        return rank(rows);
    };

    for (const auto& a : ineqs) {
        if (a.size() != n) throw DimensionMismatch("constraint has the wrong length");
        if (is_zero(a)) continue;
        std::size_t pivot = lin.size();
        for (std::size_t i = 0; i < lin.size(); ++i)
            if (dot(a, lin[i]) != 0) {
                pivot = i;
                break;
            }
        if (pivot < lin.size()) {
            Vec l0 = lin[pivot];
            Int al0 = dot(a, l0);
            if (al0 < 0) {
                l0 = -l0;
                al0 = -al0;
            }
            Matrix new_lin;
            for (std::size_t i = 0; i < lin.size(); ++i) {
                if (i == pivot) continue;
                Vec l = scaled(lin[i], al0) - scaled(l0, dot(a, lin[i]));
                new_lin.push_back(primitive(l));
            }
            for (auto& r : rays) r = primitive(scaled(r, al0) - scaled(l0, dot(a, r)));
            rays.push_back(primitive(l0));
            lin = std::move(new_lin);
            processed.push_back(a);
            continue;
        }
        std::vector<Vec> pos, zer, neg;
        for (auto& r : rays) {
            Int s = dot(a, r);
            (s > 0 ? pos : s < 0 ? neg : zer).push_back(r);
        }
        Matrix next = pos;
        next.insert(next.end(), zer.begin(), zer.end());
        const long target = static_cast<long>(n) - static_cast<long>(lin.size()) - 2;
        for (const auto& p : pos)
            for (const auto& m : neg) {
                if (target >= 0 && static_cast<long>(tight_rank({&p, &m})) != target) continue;
                next.push_back(primitive(scaled(m, dot(a, p)) - scaled(p, dot(a, m))));
            }
        processed.push_back(a);
        rays = std::move(next);
    }

    // prune anything that is not extreme (defensive; adjacency already
    // guarantees this) and duplicates
    const std::size_t want = n - lin.size() - 1;
    Matrix extreme;
    std::set<Vec> seen;
    for (const auto& r : rays) {
        if (tight_rank({&r}) != want) continue;
        if (seen.insert(r).second) extreme.push_back(r);
    }
    return {std::move(lin), std::move(extreme)};
}

} // namespace detail

// Cone generated by the given vectors; lines are allowed and end up in the
// lineality space.
inline Cone make_cone_general(const Matrix& gens, std::size_t n) {
    Matrix nonzero;
    for (const auto& g : gens) {
        if (g.size() != n) throw DimensionMismatch("generator has the wrong length");
        if (!is_zero(g)) nonzero.push_back(g);
    }
    Cone c;
    c.ambient_rank = n;
    c.equations = nonzero.empty() ? identity_matrix(n) : kernel_basis(nonzero, n);

    detail::DDResult dual = detail::double_description(nonzero, n);
    c.facets = detail::canonical_generators(dual.rays, c.equations);

    Matrix constraints = c.facets;
    for (const auto& e : c.equations) {
        constraints.push_back(e);
        constraints.push_back(-e);
    }
    detail::DDResult primal = detail::double_description(constraints, n);
    c.lineality = saturate_sublattice(primal.lineality, n);
    c.rays = detail::canonical_generators(primal.rays, c.lineality);
    return c;
}

// Strongly convex cone generated by the rays.
inline Cone make_cone(const Matrix& rays, std::size_t n) {
    Cone c = make_cone_general(rays, n);
    if (!c.strongly_convex()) throw NotStronglyConvex("the cone contains a line", to_longs(c.lineality.front()));
    return c;
}

inline Cone make_cone(const Matrix& rays) {
    if (rays.empty()) throw DimensionMismatch("ambient rank of an empty ray list is unknown");
    return make_cone(rays, rays.front().size());
}

inline Cone zero_cone(std::size_t n) { return make_cone_general({}, n); }

inline Cone dual_cone(const Cone& c) {
    Cone d;
    d.ambient_rank = c.ambient_rank;
    d.rays = c.facets;
    d.lineality = c.equations;
    d.facets = c.rays;
    d.equations = c.lineality;
    return d;
}

inline bool contains_point(const Cone& c, const Vec& v) {
    if (v.size() != c.ambient_rank) throw DimensionMismatch("point has the wrong length");
    for (const auto& e : c.equations)
        if (dot(e, v) != 0) return false;
    for (const auto& f : c.facets)
        if (dot(f, v) < 0) return false;
    return true;
}

// ---------------------------------------------------------------------------
// Primal membership: v is in a strongly convex cone iff it is a nonnegative
// combination of some linearly independent set of dim(C) rays (Caratheodory).
// Each such set is stored with a nonsingular square minor so that the
// coefficients come from Cramer's rule in integers.

class PrimalMembership {
public:
    explicit PrimalMembership(const Cone& c) : n_(c.ambient_rank) {
        if (!c.strongly_convex()) throw NotStronglyConvex("primal membership needs a pointed cone", to_longs(c.lineality.front()));
        const std::size_t k = c.dim();
        if (k == 0) return;
        const std::size_t m = c.rays.size();
        std::vector<std::size_t> idx(k);
        std::function<void(std::size_t, std::size_t)> choose = [&](std::size_t start, std::size_t depth) {
            if (depth == k) {
                add_simplex(c.rays, idx);
                return;
            }
            for (std::size_t i = start; i < m; ++i) {
                idx[depth] = i;
                choose(i + 1, depth + 1);
            }
        };
        choose(0, 0);
    }

    bool contains(const Vec& v) const {
        if (v.size() != n_) throw DimensionMismatch("point has the wrong length");
        if (is_zero(v)) return true;
        for (const auto& s : simplices_) {
            Vec sub(s.rows.size());
            for (std::size_t i = 0; i < s.rows.size(); ++i) sub[i] = v[s.rows[i]];
            Vec t = mat_vec(s.adjugate, sub); // t / det are the coefficients
            bool ok = true;
            for (const auto& x : t)
                if (x * s.det < 0) {
                    ok = false;
                    break;
                }
            if (!ok) continue;
            // the other coordinates must match too
            Vec back = zero_vec(n_);
            for (std::size_t j = 0; j < s.gens.size(); ++j)
                for (std::size_t i = 0; i < n_; ++i) back[i] += t[j] * s.gens[j][i];
            if (back == scaled(v, s.det)) return true;
        }
        return false;
    }

private:
    struct Simplex {
        Matrix gens;
        std::vector<std::size_t> rows;
        Matrix adjugate;
        Int det;
    };

    void add_simplex(const Matrix& rays, const std::vector<std::size_t>& idx) {
        const std::size_t k = idx.size();
        Matrix g;
        for (auto i : idx) g.push_back(rays[i]);
        if (rank(g) != k) return;
        // pick k coordinates where the k x k minor is nonsingular
        std::vector<std::size_t> rows;
        Matrix chosen;
        for (std::size_t r = 0; r < n_ && rows.size() < k; ++r) {
            Vec col(k);
            for (std::size_t j = 0; j < k; ++j) col[j] = g[j][r];
            Matrix trial = chosen;
            trial.push_back(col);
            if (rank(trial) == trial.size()) {
                chosen = std::move(trial);
                rows.push_back(r);
            }
        }
        // chosen[i][j] = g_j[rows_i]; solve chosen * t = v_rows
        Int det = determinant(chosen);
        Matrix adj(k, Vec(k));
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = 0; j < k; ++j) {
                Matrix minor;
                for (std::size_t a = 0; a < k; ++a) {
                    if (a == j) continue;
                    Vec row;
                    for (std::size_t b = 0; b < k; ++b)
                        if (b != i) row.push_back(chosen[a][b]);
                    minor.push_back(std::move(row));
                }
                Int cof = determinant(minor);
                adj[i][j] = ((i + j) % 2 == 0) ? cof : Int(-cof);
            }
        simplices_.push_back({std::move(g), std::move(rows), std::move(adj), std::move(det)});
    }

    std::size_t n_;
    std::vector<Simplex> simplices_;
};

inline bool contains_point_primal(const Cone& c, const Vec& v) { return PrimalMembership(c).contains(v); }

// ---------------------------------------------------------------------------
// Graded enumeration

inline void require_positive_grading(const Cone& c, const Vec& w) {
    if (w.size() != c.ambient_rank) throw DimensionMismatch("grading has the wrong length");
    if (!c.strongly_convex()) throw NotPositiveGrading("a cone with a line has no positive grading", to_longs(c.lineality.front()));
    for (const auto& r : c.rays)
        if (dot(w, r) <= 0) throw NotPositiveGrading("grading is not positive on a ray", to_longs(r));
}

// Calls visit(x) for every lattice point of the box containing
// {x in C : w.x <= bound}; w must be positive on the rays.
inline void for_each_box_point(const Cone& c, const Vec& w, long bound, const std::function<void(const Vec&)>& visit) {
    const std::size_t n = c.ambient_rank;
    if (bound < 0) return;
    std::vector<long> lo(n, 0), hi(n, 0);
    for (const auto& r : c.rays) {
        Int wr = dot(w, r);
        for (std::size_t j = 0; j < n; ++j) {
            Int num = r[j] * bound;
            Int fl, ce;
            mpz_fdiv_q(fl.get_mpz_t(), num.get_mpz_t(), wr.get_mpz_t());
            mpz_cdiv_q(ce.get_mpz_t(), num.get_mpz_t(), wr.get_mpz_t());
            lo[j] = std::min(lo[j], fl.get_si());
            hi[j] = std::max(hi[j], ce.get_si());
        }
    }
    if (n == 0) {
        visit(Vec{});
        return;
    }
    std::vector<long> x = lo;
    Vec v(n);
    for (;;) {
        for (std::size_t j = 0; j < n; ++j) v[j] = x[j];
        visit(v);
        std::size_t j = 0;
        while (j < n && x[j] == hi[j]) {
            x[j] = lo[j];
            ++j;
        }
        if (j == n) break;
        ++x[j];
    }
}

// Lattice points of C at each level w.x = 0..max_level, found by primal
// membership; points within a level are sorted lexicographically.
inline std::vector<Matrix> points_up_to_level(const Cone& c, const Vec& w, long max_level) {
    require_positive_grading(c, w);
    std::vector<Matrix> levels(static_cast<std::size_t>(std::max(max_level + 1, 0L)));
    if (max_level < 0) return levels;
    PrimalMembership member(c);
    for_each_box_point(c, w, max_level, [&](const Vec& v) {
        Int l = dot(w, v);
        if (l < 0 || l > max_level) return;
        if (member.contains(v)) levels[l.get_ui()].push_back(v);
    });
    for (auto& lv : levels) std::sort(lv.begin(), lv.end());
    return levels;
}

inline Matrix points_at_level(const Cone& c, const Vec& w, long level) {
    if (level < 0) {
        require_positive_grading(c, w);
        return {};
    }
    return points_up_to_level(c, w, level)[static_cast<std::size_t>(level)];
}

// ---------------------------------------------------------------------------
// Hilbert basis

inline Vec interior_grading(const Cone& c) {
    Vec w = zero_vec(c.ambient_rank);
    for (const auto& f : c.facets) w = w + f;
    return w;
}

inline Matrix hilbert_basis(const Cone& c) {
    if (!c.strongly_convex()) throw NotStronglyConvex("Hilbert basis of a cone with a line", to_longs(c.lineality.front()));
    if (c.rays.empty()) return {};
    const Vec w = interior_grading(c);
    std::vector<Int> weights;
    for (const auto& r : c.rays) weights.push_back(dot(w, r));
    std::sort(weights.rbegin(), weights.rend());
    Int bound = 0;
    for (std::size_t i = 0; i < c.dim() && i < weights.size(); ++i) bound += weights[i];

    std::vector<std::pair<Int, Vec>> pts;
    for_each_box_point(c, w, bound.get_si(), [&](const Vec& v) {
        Int l = dot(w, v);
        if (l <= 0 || l > bound) return;
        if (contains_point(c, v)) pts.emplace_back(l, v);
    });
    std::sort(pts.begin(), pts.end());
    Matrix basis;
    for (const auto& [l, v] : pts) {
        bool reducible = false;
        for (const auto& h : basis)
            if (contains_point(c, v - h)) {
                reducible = true;
                break;
            }
        if (!reducible) basis.push_back(v);
    }
    std::sort(basis.begin(), basis.end());
    return basis;
}

// ---------------------------------------------------------------------------
// Faces

struct FaceLattice {
    std::vector<Cone> faces;
    std::vector<std::vector<std::size_t>> ray_indices; // into the parent's rays
    std::vector<std::pair<std::size_t, std::size_t>> order; // (i, j): face i is contained in face j
};

inline FaceLattice faces(const Cone& c) {
    if (!c.strongly_convex()) throw NotStronglyConvex("face lattice of a cone with a line", to_longs(c.lineality.front()));
    std::vector<std::vector<std::size_t>> tight;
    for (const auto& f : c.facets) {
        std::vector<std::size_t> t;
        for (std::size_t i = 0; i < c.rays.size(); ++i)
            if (dot(f, c.rays[i]) == 0) t.push_back(i);
        tight.push_back(std::move(t));
    }
    std::vector<std::size_t> all(c.rays.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    std::set<std::vector<std::size_t>> found{all};
    std::vector<std::vector<std::size_t>> queue{all};
    while (!queue.empty()) {
        auto cur = std::move(queue.back());
        queue.pop_back();
        for (const auto& t : tight) {
            std::vector<std::size_t> meet;
            std::set_intersection(cur.begin(), cur.end(), t.begin(), t.end(), std::back_inserter(meet));
            if (found.insert(meet).second) queue.push_back(std::move(meet));
        }
    }

    std::vector<std::pair<std::pair<std::size_t, std::vector<std::size_t>>, Cone>> tmp;
    for (const auto& s : found) {
        Matrix gens;
        for (auto i : s) gens.push_back(c.rays[i]);
        Cone f = make_cone(gens, c.ambient_rank);
        tmp.push_back({{f.dim(), s}, std::move(f)});
    }
    std::sort(tmp.begin(), tmp.end(), [](const auto& a, const auto& b) { return a.first < b.first; });

    FaceLattice fl;
    for (auto& [key, f] : tmp) {
        fl.ray_indices.push_back(key.second);
        fl.faces.push_back(std::move(f));
    }
    for (std::size_t i = 0; i < fl.faces.size(); ++i)
        for (std::size_t j = 0; j < fl.faces.size(); ++j)
            if (std::includes(fl.ray_indices[j].begin(), fl.ray_indices[j].end(), fl.ray_indices[i].begin(),
                              fl.ray_indices[i].end()))
                fl.order.emplace_back(i, j);
    return fl;
}

// Indices of the facets of sigma vanishing on every ray of tau, after
// checking that tau is a face of sigma.
inline std::vector<std::size_t> facets_containing(const Cone& tau, const Cone& sigma) {
    if (tau.ambient_rank != sigma.ambient_rank) throw DimensionMismatch("face and cone live in different lattices");
    if (!sigma.strongly_convex()) throw NotStronglyConvex("faces of a cone with a line", to_longs(sigma.lineality.front()));
    std::set<Vec> sig_rays(sigma.rays.begin(), sigma.rays.end());
    for (const auto& r : tau.rays)
        if (!sig_rays.count(r)) throw NotAFace("ray is not a ray of the cone", to_longs(r));
    if (!tau.strongly_convex()) throw NotAFace("face contains a line", to_longs(tau.lineality.front()));
    std::vector<std::size_t> fs;
    for (std::size_t i = 0; i < sigma.facets.size(); ++i) {
        bool all = true;
        for (const auto& r : tau.rays)
            if (dot(sigma.facets[i], r) != 0) {
                all = false;
                break;
            }
        if (all) fs.push_back(i);
    }
    // the face cut out by those facets must have exactly tau's rays
    std::set<Vec> cut;
    for (const auto& r : sigma.rays) {
        bool on = true;
        for (auto i : fs)
            if (dot(sigma.facets[i], r) != 0) {
                on = false;
                break;
            }
        if (on) cut.insert(r);
    }
    if (cut != std::set<Vec>(tau.rays.begin(), tau.rays.end())) {
        Vec extra;
        for (const auto& r : cut)
            if (!std::binary_search(tau.rays.begin(), tau.rays.end(), r)) extra = r;
        throw NotAFace("rays do not span a face of the cone", extra.empty() ? std::vector<long>{} : to_longs(extra));
    }
    return fs;
}

inline bool is_face(const Cone& tau, const Cone& sigma) {
    try {
        facets_containing(tau, sigma);
        return true;
    } catch (const NotAFace&) {
        return false;
    }
}

// tau^perp intersected with the dual cone, as a face of the dual.
inline Cone face_dual(const Cone& tau, const Cone& sigma) {
    std::vector<std::size_t> fs = facets_containing(tau, sigma);
    Matrix gens;
    for (auto i : fs) gens.push_back(sigma.facets[i]);
    for (const auto& e : sigma.equations) {
        gens.push_back(e);
        gens.push_back(-e);
    }
    return make_cone_general(gens, sigma.ambient_rank);
}

// ---------------------------------------------------------------------------

inline Cone image_cone(const Cone& c, const LatticeMap& proj) {
    if (proj.source_rank != c.ambient_rank) throw DimensionMismatch("projection does not start at the cone's lattice");
    Matrix gens;
    for (const auto& r : c.rays) gens.push_back(proj(r));
    for (const auto& l : c.lineality) {
        gens.push_back(proj(l));
        gens.push_back(-proj(l));
    }
    return make_cone_general(gens, proj.target_rank);
}

inline bool is_conical_grading(const Cone& c, const Vec& rho) {
    if (rho.size() != c.ambient_rank) throw DimensionMismatch("grading has the wrong length");
    if (!c.full_dimensional()) return false;
    for (const auto& f : c.facets)
        if (dot(f, rho) <= 0) return false;
    return true;
}

} // namespace toricdual
