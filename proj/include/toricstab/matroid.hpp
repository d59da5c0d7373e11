#pragma once

// The intersection lattice L(E), the ground set G(E), flats, compatible flats
// and subbundle recognition.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <queue>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "toricstab/exactla.hpp"
#include "toricstab/klyachko.hpp"

namespace toricstab {

/// Intersection-closed family of subspaces, sorted by (dimension, canonical basis).
struct SubspaceLattice {
    std::size_t ambient = 0;
    std::vector<Subspace> elements;
};

/// All distinct intersections of filtration steps over `rays` (default: every ray).
inline SubspaceLattice build_lattice(const ToricBundle& b, const std::optional<std::vector<std::size_t>>& rays = std::nullopt) {
    std::vector<std::size_t> use;
    if (rays) {
        if (rays->empty()) throw InputError("build_lattice: empty ray subset");
        use = *rays;
    } else {
        use.resize(b.fan().ray_count());
        for (std::size_t i = 0; i < use.size(); ++i) use[i] = i;
    }
    std::set<Subspace> current{Subspace::full(b.rank())};
    for (auto i : use) {
        std::set<Subspace> next;
        for (const auto& x : current) {
            next.insert(Subspace(b.rank()));
            for (const auto& step : b.filtration(i).steps()) next.insert(intersect(x, step.space));
        }
        current = std::move(next);
    }
    return {b.rank(), std::vector<Subspace>(current.begin(), current.end())};
}

/// The ground set: the vectors e_0..e_l and, for each, the index of
/// the lattice element at whose step it was appended.
struct GroundSet {
    std::size_t ambient = 0;
    RatMatrix vectors;
    std::vector<std::size_t> step;

    std::size_t size() const noexcept { return vectors.size(); }

    std::vector<std::size_t> indices_in(const Subspace& s) const {
        std::vector<std::size_t> out;
        for (std::size_t i = 0; i < vectors.size(); ++i)
            if (s.contains(vectors[i])) out.push_back(i);
        return out;
    }
};

struct GroundSetOptions {
    /// Complement bases are drawn from V ∩ prefer before the rest of V.
    std::optional<Subspace> prefer;
    /// Shuffles the traversal inside each dimension and draws complement
    /// bases as random combinations; used to check that the output does not depend on traversal order.
    std::optional<std::uint64_t> shuffle_seed;
};

inline GroundSet compute_ground_set(const SubspaceLattice& lattice, const GroundSetOptions& opts = {}) {
    GroundSet g;
    g.ambient = lattice.ambient;
    std::mt19937_64 rng(opts.shuffle_seed.value_or(0));
    std::size_t top = 0;
    for (const auto& v : lattice.elements) top = std::max(top, v.dim());
    for (std::size_t k = 1; k <= top; ++k) {
        std::vector<std::size_t> order;
        for (std::size_t i = 0; i < lattice.elements.size(); ++i)
            if (lattice.elements[i].dim() == k) order.push_back(i);
        if (opts.shuffle_seed) std::shuffle(order.begin(), order.end(), rng);
        for (auto idx : order) {
            const Subspace& v = lattice.elements[idx];
            RatMatrix inside;
            for (const auto& e : g.vectors)
                if (v.contains(e)) inside.push_back(e);
            Subspace cur = Subspace::span(inside, g.ambient);
            auto offer = [&](const RatVector& w) {
                if (cur.dim() == v.dim() || is_zero(w) || cur.contains(w)) return;
                const RatVector e = to_rational(primitive_integer_vector(w));
                g.vectors.push_back(e);
                g.step.push_back(idx);
                cur = subspace_sum(cur, Subspace::line(e));
            };
            auto extend_from = [&](const Subspace& s) {
                if (opts.shuffle_seed) {
                    for (int t = 0; t < 64 && cur.dim() < v.dim() && !s.is_zero(); ++t) offer(detail::random_vector_in(s, rng));
                }
                for (const auto& row : s.basis()) offer(row);
            };
            if (opts.prefer) extend_from(intersect(v, *opts.prefer));
            extend_from(v);
        }
    }
    return g;
}

inline GroundSet ground_set(const ToricBundle& b, const GroundSetOptions& opts = {}) {
    return compute_ground_set(build_lattice(b), opts);
}

/// A closed subset of the ground set: span(f) ∩ G = f.
struct Flat {
    std::vector<std::size_t> indices;
    Subspace span;

    std::size_t rank() const noexcept { return span.dim(); }
    friend bool operator==(const Flat& a, const Flat& b) { return a.indices == b.indices; }
};

inline Flat closure(const GroundSet& g, const std::vector<std::size_t>& subset) {
    RatMatrix rows;
    for (auto i : subset) rows.push_back(g.vectors.at(i));
    Subspace s = Subspace::span(rows, g.ambient);
    return {g.indices_in(s), std::move(s)};
}

inline bool is_proper_nonzero(const Flat& f, const GroundSet& g) {
    return !f.indices.empty() && f.span.dim() < g.ambient;
}

/// Every flat exactly once, sorted by (rank, indices); includes the empty and
/// full flats.
inline std::vector<Flat> enumerate_flats(const GroundSet& g) {
    std::vector<Flat> out;
    std::set<std::vector<std::size_t>> seen;
    std::queue<Flat> todo;
    Flat bottom = closure(g, {});
    seen.insert(bottom.indices);
    todo.push(bottom);
    while (!todo.empty()) {
        Flat f = todo.front();
        todo.pop();
        for (std::size_t i = 0; i < g.size(); ++i) {
            if (std::binary_search(f.indices.begin(), f.indices.end(), i)) continue;
            auto s = f.indices;
            s.push_back(i);
            Flat h = closure(g, s);
            if (seen.insert(h.indices).second) todo.push(h);
        }
        out.push_back(std::move(f));
    }
    std::sort(out.begin(), out.end(), [](const Flat& a, const Flat& b) {
        if (a.rank() != b.rank()) return a.rank() < b.rank();
        return a.indices < b.indices;
    });
    return out;
}

struct FlatCompatibility {
    bool compatible = false;
    std::vector<ConeSplitting> bases; // witness bases when compatible
};

inline std::size_t count_inside(const RatMatrix& basis, const Subspace& s) {
    return static_cast<std::size_t>(std::count_if(basis.begin(), basis.end(), [&](const RatVector& v) { return s.contains(v); }));
}

/// Decides whether some compatible basis of every cone meets span(f) in exactly
/// dim span(f) vectors. Bases are built with draws taken inside span(f) first.
inline FlatCompatibility is_compatible_flat(const ToricBundle& b, const GroundSet& g, const Flat& f, std::uint64_t seed = 0) {
    require_compatible(b, seed);
    BasisPreference pref;
    for (auto i : f.indices) pref.candidates.push_back(g.vectors[i]);
    for (std::size_t i = 0; i < g.size(); ++i)
        if (!std::binary_search(f.indices.begin(), f.indices.end(), i)) pref.candidates.push_back(g.vectors[i]);
    pref.inside = f.span;
    FlatCompatibility res;
    for (std::size_t c = 0; c < b.fan().max_cones.size(); ++c) {
        const auto classes = profile_classes(b, c);
        std::optional<ConeSplitting> found;
        for (int attempt = 0; attempt < kSplittingAttempts && !found; ++attempt) {
            auto s = split_cone(b, c, classes, seed, attempt, pref);
            if (s && count_inside(s->basis, f.span) == f.span.dim()) found = std::move(s);
        }
        if (!found) return {false, {}};
        res.bases.push_back(std::move(*found));
    }
    res.compatible = true;
    return res;
}

struct SubbundleResult {
    bool is_subbundle = false;
    GroundSet ground_set; // computed with preference for F
    Flat flat;            // closure of G ∩ F
    std::vector<ConeSplitting> bases;
    std::string reason;
};

inline SubbundleResult is_subbundle(const ToricBundle& b, const Subspace& f, std::uint64_t seed = 0) {
    if (f.is_zero()) throw InputError("is_subbundle: zero subspace");
    if (f.ambient_dim() != b.rank()) throw InputError("is_subbundle: ambient dimension mismatch");
    require_compatible(b, seed);
    SubbundleResult res;
    res.ground_set = compute_ground_set(build_lattice(b), {f, std::nullopt});
    res.flat = closure(res.ground_set, res.ground_set.indices_in(f));
    if (!(res.flat.span == f)) {
        res.reason = "G ∩ F does not span F";
        return res;
    }
    auto fc = is_compatible_flat(b, res.ground_set, res.flat, seed);
    if (!fc.compatible) {
        res.reason = "no compatible basis meets F in dim F vectors on every cone";
        return res;
    }
    // The restricted bases must split the intersected filtrations E^i(j) ∩ F.
    for (const auto& s : fc.bases) {
        RatMatrix inside;
        for (const auto& v : s.basis)
            if (f.contains(v)) inside.push_back(v);
        for (auto i : b.fan().max_cones[s.cone]) {
            const auto& fil = b.filtration(i);
            for (const auto& step : fil.steps()) {
                RatMatrix lines;
                for (const auto& v : inside)
                    if (fil.level_of(v) >= step.max_j) lines.push_back(v);
                if (!(Subspace::span(lines, b.rank()) == intersect(step.space, f))) {
                    res.reason = "restricted basis does not split E^" + std::to_string(i) + " ∩ F on cone " + std::to_string(s.cone);
                    return res;
                }
            }
        }
    }
    res.bases = std::move(fc.bases);
    res.is_subbundle = true;
    return res;
}

} // namespace toricstab
