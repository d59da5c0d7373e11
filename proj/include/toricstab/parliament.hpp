#pragma once

// H-polytopes over a fan, parliaments of polytopes, Newton and average
// polytopes, global generation and reconstruction of filtrations.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "toricstab/exactla.hpp"
#include "toricstab/fan.hpp"
#include "toricstab/klyachko.hpp"
#include "toricstab/matroid.hpp"

namespace toricstab {

/// {m : <m, v_i> <= c_i} with one rational bound per fan ray.
class HPolytope {
public:
    HPolytope() = default;
    HPolytope(IntMatrix normals, RatVector bounds) : normals_(std::move(normals)), bounds_(std::move(bounds)) {
        if (normals_.size() != bounds_.size()) throw InputError("polytope: one bound per normal required");
        if (normals_.empty()) throw InputError("polytope: no constraints");
        dim_ = normals_.front().size();
        for (const auto& n : normals_)
            if (n.size() != dim_) throw InputError("polytope: normals of mixed dimension");
    }

    std::size_t dim() const noexcept { return dim_; }
    const IntMatrix& normals() const noexcept { return normals_; }
    const RatVector& bounds() const noexcept { return bounds_; }

    bool contains(const RatVector& m) const {
        for (std::size_t i = 0; i < normals_.size(); ++i)
            if (dot(m, normals_[i]) > bounds_[i]) return false;
        return true;
    }
    bool contains(const IntVector& m) const { return contains(to_rational(m)); }

    /// Basic feasible solutions, sorted and deduplicated.
    const std::vector<RatVector>& vertices() const {
        if (!vertices_) {
            std::vector<RatVector> out;
            detail::for_each_subset(normals_.size(), dim_, [&](const std::vector<std::size_t>& s) {
                RatMatrix a;
                RatVector rhs;
                for (auto i : s) {
                    a.push_back(to_rational(normals_[i]));
                    rhs.push_back(bounds_[i]);
                }
                auto x = solve_rational(a, rhs);
                if (x && contains(*x)) out.push_back(std::move(*x));
            });
            std::sort(out.begin(), out.end());
            out.erase(std::unique(out.begin(), out.end()), out.end());
            vertices_ = std::move(out);
        }
        return *vertices_;
    }

    bool is_empty() const { return vertices().empty(); }

    /// Integer points, by a scan of the vertex bounding box.
    std::vector<IntVector> lattice_points() const {
        const auto& vs = vertices();
        if (vs.empty()) return {};
        IntVector lo(dim_), hi(dim_);
        for (std::size_t k = 0; k < dim_; ++k) {
            Rational mn = vs[0][k], mx = vs[0][k];
            for (const auto& v : vs) {
                mn = std::min(mn, v[k]);
                mx = std::max(mx, v[k]);
            }
            mpz_cdiv_q(lo[k].get_mpz_t(), mn.get_num_mpz_t(), mn.get_den_mpz_t());
            mpz_fdiv_q(hi[k].get_mpz_t(), mx.get_num_mpz_t(), mx.get_den_mpz_t());
            if (lo[k] > hi[k]) return {};
        }
        std::vector<IntVector> out;
        IntVector p = lo;
        while (true) {
            if (contains(p)) out.push_back(p);
            std::size_t k = 0;
            while (k < dim_ && p[k] == hi[k]) p[k] = lo[k], ++k;
            if (k == dim_) break;
            ++p[k];
        }
        std::sort(out.begin(), out.end());
        return out;
    }

    /// P + u.
    HPolytope translated(const IntVector& u) const {
        RatVector b = bounds_;
        for (std::size_t i = 0; i < b.size(); ++i) b[i] += int_dot(u, normals_[i]);
        return HPolytope(normals_, std::move(b));
    }

    friend bool operator==(const HPolytope& a, const HPolytope& b) { return a.normals_ == b.normals_ && a.bounds_ == b.bounds_; }

private:
    std::size_t dim_ = 0;
    IntMatrix normals_;
    RatVector bounds_;
    mutable std::optional<std::vector<RatVector>> vertices_;
};

inline HPolytope newton_polytope(const Fan& fan, const RatVector& a) {
    if (a.size() != fan.ray_count()) throw InputError("newton_polytope: divisor length does not match ray count");
    return HPolytope(fan.rays, a);
}

inline HPolytope newton_polytope(const Fan& fan, const IntVector& a) { return newton_polytope(fan, to_rational(a)); }

/// P_e; with F given, the filtrations are first intersected with F.
inline HPolytope polytope_of(const ToricBundle& b, const RatVector& e, const std::optional<Subspace>& f = std::nullopt) {
    if (e.size() != b.rank()) throw InputError("polytope_of: vector has wrong length");
    if (is_zero(e)) throw InputError("polytope_of: zero vector");
    if (f && !f->contains(e)) throw InputError("polytope_of: vector not in the subspace");
    // e lies in E^i(j) ∩ F exactly when it lies in E^i(j), so the bound is unchanged.
    RatVector bounds;
    for (const auto& fil : b.filtrations()) bounds.emplace_back(fil.level_of(e));
    return HPolytope(b.fan().rays, std::move(bounds));
}

/// Newton polytope of c1(F) / dim F.
inline HPolytope average_polytope(const ToricBundle& b, const Subspace& f) {
    const IntVector c = first_chern_coefficients(b, f);
    RatVector bounds;
    for (const auto& x : c) bounds.emplace_back(Rational(x, Integer(static_cast<unsigned long>(f.dim()))));
    for (auto& x : bounds) x.canonicalize();
    return HPolytope(b.fan().rays, std::move(bounds));
}

struct CharacterAnnotation {
    IntVector character;
    RatVector basis_vector;
    std::optional<std::size_t> label; // ground-set index whose line is the basis line
    std::vector<std::size_t> flat;    // closure flat of the line when no single label spans it
    bool flagged = false;
};

struct ConeAnnotation {
    std::size_t cone = 0;
    std::vector<CharacterAnnotation> entries;
};

struct Parliament {
    Fan fan;
    std::size_t rank = 0;
    GroundSet ground_set;
    std::vector<HPolytope> polytopes; // aligned with ground_set.vectors
    std::vector<ConeAnnotation> annotations;
};

inline Parliament parliament(const ToricBundle& b, std::uint64_t seed = 0, const GroundSetOptions& opts = {}) {
    Parliament p{b.fan(), b.rank(), ground_set(b, opts), {}, {}};
    BasisPreference pref{p.ground_set.vectors, std::nullopt};
    const CharacterSheet sheet = require_compatible(b, seed, pref);
    for (const auto& e : p.ground_set.vectors) p.polytopes.push_back(polytope_of(b, e));
    std::optional<std::vector<Flat>> flats;
    for (const auto& s : sheet.cones) {
        ConeAnnotation ca{s.cone, {}};
        for (std::size_t n = 0; n < s.basis.size(); ++n) {
            CharacterAnnotation a{s.characters[n], s.basis[n], std::nullopt, {}, false};
            const Subspace line = Subspace::line(s.basis[n]);
            for (std::size_t k = 0; k < p.ground_set.size() && !a.label; ++k)
                if (line.contains(p.ground_set.vectors[k])) a.label = k;
            if (!a.label) {
                if (!flats) flats = enumerate_flats(p.ground_set);
                for (const auto& f : *flats)
                    if (f.span.contains(s.basis[n])) {
                        a.flat = f.indices;
                        break;
                    }
                a.flagged = true;
            }
            ca.entries.push_back(std::move(a));
        }
        std::sort(ca.entries.begin(), ca.entries.end(), [](const CharacterAnnotation& x, const CharacterAnnotation& y) {
            const std::size_t lx = x.label.value_or(SIZE_MAX), ly = y.label.value_or(SIZE_MAX);
            if (lx != ly) return lx < ly;
            return x.character < y.character;
        });
        p.annotations.push_back(std::move(ca));
    }
    return p;
}

/// Every annotated character is a lattice point of its matched polytope.
inline bool is_globally_generated(const Parliament& p) {
    for (const auto& ca : p.annotations)
        for (const auto& a : ca.entries)
            if (!a.label || !p.polytopes[*a.label].contains(a.character)) return false;
    return true;
}

inline bool is_globally_generated(const ToricBundle& b, std::uint64_t seed = 0) { return is_globally_generated(parliament(b, seed)); }

/// Per ray, E(j) = span{ e : some lattice point u of P_e has <u, v_i> >= j }.
inline std::vector<Filtration> reconstruct_filtrations(const Parliament& p) {
    for (const auto& ca : p.annotations)
        for (const auto& a : ca.entries)
            if (a.flagged) throw InputError("reconstruct: a character line is not spanned by a ground-set element");
    if (!is_globally_generated(p)) throw InputError("reconstruct: parliament is not globally generated");
    std::vector<std::vector<IntVector>> points;
    for (const auto& poly : p.polytopes) points.push_back(poly.lattice_points());
    std::vector<Filtration> out;
    for (const auto& v : p.fan.rays) {
        std::vector<std::optional<Integer>> h(points.size());
        std::vector<Integer> levels;
        for (std::size_t e = 0; e < points.size(); ++e)
            for (const auto& u : points[e]) {
                const Integer x = int_dot(u, v);
                if (!h[e] || x > *h[e]) h[e] = x;
            }
        for (const auto& x : h)
            if (x) levels.push_back(*x);
        std::sort(levels.begin(), levels.end());
        levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
        std::vector<std::pair<Integer, Subspace>> values;
        for (const auto& l : levels) {
            RatMatrix rows;
            for (std::size_t e = 0; e < h.size(); ++e)
                if (h[e] && *h[e] >= l) rows.push_back(p.ground_set.vectors[e]);
            values.emplace_back(l, Subspace::span(rows, p.rank));
        }
        out.push_back(Filtration::from_values(p.rank, std::move(values)));
    }
    return out;
}

} // namespace toricstab
