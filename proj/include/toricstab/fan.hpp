#pragma once

// Smooth complete fans: structural checks, smoothness, completeness proxy, walls.

#include <algorithm>
#include <cstddef>
#include <functional>
#include <map>
#include <queue>
#include <set>
#include <string>
#include <vector>

#include "toricstab/exactla.hpp"

namespace toricstab {

namespace detail {

/// Calls f(indices) for every k-subset of {0..n-1} in lexicographic order.
inline void for_each_subset(std::size_t n, std::size_t k, const std::function<void(const std::vector<std::size_t>&)>& f) {
    if (k > n) return;
    std::vector<std::size_t> idx(k);
    for (std::size_t i = 0; i < k; ++i) idx[i] = i;
    while (true) {
        f(idx);
        if (k == 0) return;
        std::size_t i = k;
        while (i > 0 && idx[i - 1] == n - k + i - 1) --i;
        if (i == 0) return;
        ++idx[i - 1];
        for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
}

} // namespace detail

/// Rays are user-ordered and that order is frozen: every divisor and weight
/// vector is indexed against it.
struct Fan {
    std::size_t dim = 0;
    IntMatrix rays;
    std::vector<std::vector<std::size_t>> max_cones;

    std::size_t ray_count() const noexcept { return rays.size(); }

    IntMatrix cone_rays(std::size_t cone) const {
        IntMatrix out;
        for (auto i : max_cones.at(cone)) out.push_back(rays.at(i));
        return out;
    }

    bool cone_contains(std::size_t cone, std::size_t ray) const {
        const auto& c = max_cones.at(cone);
        return std::find(c.begin(), c.end(), ray) != c.end();
    }

    friend bool operator==(const Fan&, const Fan&) = default;
};

struct ConeCheck {
    std::size_t cone = 0;
    Integer det;
    bool smooth = false;
};

struct WallCheck {
    std::vector<std::size_t> tau;
    std::vector<std::size_t> cones;
    bool paired = false;
};

struct FanReport {
    std::vector<ConeCheck> cones;
    std::vector<WallCheck> walls;
    bool positively_spanning = false;
    bool dual_graph_connected = false;
    /// Completeness is certified by a proxy, not by a full-support computation.
    std::string completeness_note =
        "completeness proxy: every wall in exactly two maximal cones, rays positively span, dual graph connected";

    bool pass() const {
        return positively_spanning && dual_graph_connected &&
               std::all_of(cones.begin(), cones.end(), [](const ConeCheck& c) { return c.smooth; }) &&
               std::all_of(walls.begin(), walls.end(), [](const WallCheck& w) { return w.paired; });
    }
};

/// Codimension-one cone shared by two maximal cones.
struct Wall {
    std::vector<std::size_t> tau_rays;
    std::size_t sigma = 0;
    std::size_t sigma_prime = 0;
    std::size_t extra_ray_sigma = 0;
    std::size_t extra_ray_sigma_prime = 0;
};

/// Throws InputError on structural defects (bad lengths, zero, non-primitive
/// or duplicate rays, malformed cones).
inline void check_fan_structure(const Fan& f) {
    if (f.dim == 0) throw InputError("fan: dimension must be positive");
    if (f.rays.empty()) throw InputError("fan: no rays");
    std::set<IntVector> seen;
    for (std::size_t i = 0; i < f.rays.size(); ++i) {
        const auto& v = f.rays[i];
        const std::string where = "fan: ray " + std::to_string(i);
        if (v.size() != f.dim) throw InputError(where + " has wrong length");
        if (is_zero(v)) throw InputError(where + " is zero");
        if (!is_primitive(v)) throw InputError(where + " is not primitive");
        if (!seen.insert(v).second) throw InputError(where + " duplicates an earlier ray");
    }
    if (f.max_cones.empty()) throw InputError("fan: no maximal cones");
    std::set<std::vector<std::size_t>> cones;
    for (std::size_t c = 0; c < f.max_cones.size(); ++c) {
        const std::string where = "fan: cone " + std::to_string(c);
        auto idx = f.max_cones[c];
        if (idx.size() != f.dim) throw InputError(where + " has " + std::to_string(idx.size()) + " rays, expected " + std::to_string(f.dim));
        for (auto i : idx)
            if (i >= f.rays.size()) throw InputError(where + " references ray " + std::to_string(i) + " out of range");
        std::sort(idx.begin(), idx.end());
        if (std::adjacent_find(idx.begin(), idx.end()) != idx.end()) throw InputError(where + " repeats a ray");
        if (!cones.insert(idx).second) throw InputError(where + " duplicates an earlier cone");
    }
}

/// True iff the nonnegative combinations of `vectors` cover R^dim.
inline bool positively_spans(const IntMatrix& vectors, std::size_t dim) {
    RatMatrix rows;
    for (const auto& v : vectors) rows.push_back(to_rational(v));
    if (rank(rows, dim) != dim) return false;
    // The cone {m : <m, v> <= 0 for all v} is pointed; it is nonzero iff it has
    // an extreme ray cut out by dim-1 independent tight constraints.
    bool spans = true;
    detail::for_each_subset(rows.size(), dim - 1, [&](const std::vector<std::size_t>& s) {
        if (!spans) return;
        RatMatrix sub;
        for (auto i : s) sub.push_back(rows[i]);
        const auto ns = nullspace(sub, dim);
        if (ns.size() != 1) return;
        bool all_le = true, all_ge = true;
        for (const auto& v : rows) {
            const Rational p = dot(ns[0], v);
            if (p > 0) all_le = false;
            if (p < 0) all_ge = false;
        }
        if (all_le || all_ge) spans = false;
    });
    return spans;
}

inline std::map<std::vector<std::size_t>, std::vector<std::size_t>> wall_incidence(const Fan& f) {
    std::map<std::vector<std::size_t>, std::vector<std::size_t>> inc;
    for (std::size_t c = 0; c < f.max_cones.size(); ++c) {
        auto idx = f.max_cones[c];
        std::sort(idx.begin(), idx.end());
        detail::for_each_subset(idx.size(), idx.size() - 1, [&](const std::vector<std::size_t>& s) {
            std::vector<std::size_t> tau;
            for (auto k : s) tau.push_back(idx[k]);
            inc[tau].push_back(c);
        });
    }
    return inc;
}

inline FanReport validate_fan(const Fan& f) {
    check_fan_structure(f);
    FanReport rep;
    for (std::size_t c = 0; c < f.max_cones.size(); ++c) {
        const Integer det = determinant(f.cone_rays(c));
        rep.cones.push_back({c, det, abs(det) == 1});
    }
    const auto inc = wall_incidence(f);
    for (const auto& [tau, cones] : inc) rep.walls.push_back({tau, cones, cones.size() == 2});
    rep.positively_spanning = positively_spans(f.rays, f.dim);

    std::vector<std::vector<std::size_t>> adj(f.max_cones.size());
    for (const auto& [tau, cones] : inc)
        if (cones.size() == 2) {
            adj[cones[0]].push_back(cones[1]);
            adj[cones[1]].push_back(cones[0]);
        }
    std::vector<bool> seen(f.max_cones.size(), false);
    std::queue<std::size_t> q;
    q.push(0);
    seen[0] = true;
    std::size_t reached = 1;
    while (!q.empty()) {
        const auto c = q.front();
        q.pop();
        for (auto n : adj[c])
            if (!seen[n]) {
                seen[n] = true;
                ++reached;
                q.push(n);
            }
    }
    rep.dual_graph_connected = reached == f.max_cones.size();
    return rep;
}

/// One wall per interior codimension-one cone, ordered by its ray index set.
/// sigma is the lower-indexed of the two maximal cones.
inline std::vector<Wall> walls(const Fan& f) {
    const auto rep = validate_fan(f);
    if (!rep.pass()) throw InputError("walls: fan failed validation");
    std::vector<Wall> out;
    for (const auto& [tau, cones] : wall_incidence(f)) {
        Wall w;
        w.tau_rays = tau;
        w.sigma = cones[0];
        w.sigma_prime = cones[1];
        auto extra = [&](std::size_t cone) {
            for (auto i : f.max_cones[cone])
                if (!std::binary_search(tau.begin(), tau.end(), i)) return i;
            throw VerificationFailure("walls: cone has no ray outside its wall");
        };
        w.extra_ray_sigma = extra(w.sigma);
        w.extra_ray_sigma_prime = extra(w.sigma_prime);
        out.push_back(std::move(w));
    }
    return out;
}

} // namespace toricstab
