#pragma once

// Polarizations, slopes, the flat-based stability decision, the tangent
// bundle weight condition and restriction to invariant curves.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "toricstab/exactla.hpp"
#include "toricstab/fan.hpp"
#include "toricstab/klyachko.hpp"
#include "toricstab/matroid.hpp"
#include "toricstab/parliament.hpp"

namespace toricstab {

struct Divisor {
    RatVector coefficients;

    Rational pair_with(const RatVector& t) const {
        if (t.size() != coefficients.size()) throw InputError("divisor and weights have different lengths");
        return dot(coefficients, t);
    }
};

enum class PolarizationSource { Weights, Divisor };

struct Polarization {
    RatVector weights;
    PolarizationSource source = PolarizationSource::Weights;
    std::optional<RatVector> divisor;
};

namespace detail {

inline Integer factorial(std::size_t n) {
    Integer f = 1;
    for (std::size_t k = 2; k <= n; ++k) f *= static_cast<unsigned long>(k);
    return f;
}

/// Primitive normals, zero rows dropped (returns false if one is violated),
/// duplicate normals merged to the tightest bound.
inline bool normalize_constraints(IntMatrix& normals, RatVector& bounds) {
    std::map<IntVector, Rational> merged;
    for (std::size_t i = 0; i < normals.size(); ++i) {
        if (is_zero(normals[i])) {
            if (bounds[i] < 0) return false;
            continue;
        }
        Integer g = 0;
        for (const auto& x : normals[i]) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_mpz_t());
        IntVector n = normals[i];
        for (auto& x : n) x /= g;
        const Rational c = bounds[i] / Rational(g);
        auto it = merged.find(n);
        if (it == merged.end()) merged.emplace(n, c);
        else it->second = std::min(it->second, c);
    }
    normals.clear();
    bounds.clear();
    for (auto& [n, c] : merged) {
        normals.push_back(n);
        bounds.push_back(c);
    }
    return true;
}

inline Rational lattice_volume(IntMatrix normals, RatVector bounds, std::size_t k);

/// Constraints of {x : <x, n_l> <= c_l} restricted to the hyperplane <x, n_j> = c_j,
/// in coordinates of a basis of the lattice n_j-perp.
inline std::pair<IntMatrix, RatVector> facet_system(const IntMatrix& normals, const RatVector& bounds, std::size_t j) {
    const IntMatrix basis = orthogonal_lattice_basis(normals[j]);
    const RatVector nj = to_rational(normals[j]);
    RatVector x0 = nj;
    const Rational s = bounds[j] / dot(nj, nj);
    for (auto& x : x0) x *= s;
    IntMatrix sub;
    RatVector subb;
    for (std::size_t l = 0; l < normals.size(); ++l) {
        if (l == j) continue;
        IntVector n;
        for (const auto& b : basis) n.push_back(int_dot(b, normals[l]));
        sub.push_back(std::move(n));
        subb.push_back(bounds[l] - dot(x0, normals[l]));
    }
    return {std::move(sub), std::move(subb)};
}

/// Euclidean volume in lattice units of a bounded polytope in Q^k, by the
/// pyramid decomposition over facets with apex at the origin.
inline Rational lattice_volume(IntMatrix normals, RatVector bounds, std::size_t k) {
    if (!normalize_constraints(normals, bounds)) return 0;
    if (k == 0) return 1;
    if (k == 1) {
        std::optional<Rational> upper, lower;
        for (std::size_t i = 0; i < normals.size(); ++i) {
            if (normals[i][0] > 0) upper = upper ? std::min(*upper, bounds[i]) : bounds[i];
            else lower = lower ? std::max(*lower, Rational(-bounds[i])) : Rational(-bounds[i]);
        }
        if (!upper || !lower) throw InputError("lattice_volume: unbounded polytope");
        return *upper > *lower ? Rational(*upper - *lower) : Rational(0);
    }
    Rational vol = 0;
    for (std::size_t j = 0; j < normals.size(); ++j) {
        if (bounds[j] == 0) continue;
        auto [sub, subb] = facet_system(normals, bounds, j);
        vol += bounds[j] * lattice_volume(std::move(sub), std::move(subb), k - 1);
    }
    return vol / static_cast<long>(k);
}

} // namespace detail

inline RatVector balance_vector(const Fan& fan, const RatVector& t) {
    RatVector s(fan.dim, 0);
    for (std::size_t i = 0; i < t.size(); ++i)
        for (std::size_t k = 0; k < fan.dim; ++k) s[k] += t[i] * fan.rays[i][k];
    return s;
}

inline Polarization validate_polarization(const Fan& fan, const RatVector& t) {
    if (t.size() != fan.ray_count()) throw InputError("polarization: " + std::to_string(t.size()) + " weights for " + std::to_string(fan.ray_count()) + " rays");
    for (std::size_t i = 0; i < t.size(); ++i)
        if (t[i] < 0) throw InputError("polarization: weight " + std::to_string(i) + " is negative");
    const RatVector s = balance_vector(fan, t);
    if (!is_zero(s)) {
        std::string v;
        for (std::size_t k = 0; k < s.size(); ++k) v += (k ? "," : "") + to_string(s[k]);
        throw InputError("polarization: balance violated, sum of t_i v_i = (" + v + ")");
    }
    IntMatrix positive;
    for (std::size_t i = 0; i < t.size(); ++i)
        if (t[i] > 0) positive.push_back(fan.rays[i]);
    if (!positively_spans(positive, fan.dim)) throw InputError("polarization: rays with positive weight do not positively span");
    return {t, PolarizationSource::Weights, std::nullopt};
}

/// t_i = (d-1)! times the lattice volume of the facet of P_a with outer normal v_i.
inline Polarization weights_from_divisor(const Fan& fan, const RatVector& a) {
    const HPolytope p = newton_polytope(fan, a);
    const auto& vs = p.vertices();
    if (vs.empty()) throw InputError("weights: Newton polytope of the divisor is empty");
    RatMatrix diffs;
    for (const auto& v : vs) {
        RatVector d(fan.dim);
        for (std::size_t k = 0; k < fan.dim; ++k) d[k] = v[k] - vs[0][k];
        diffs.push_back(std::move(d));
    }
    if (rank(diffs, fan.dim) != fan.dim) throw InputError("weights: Newton polytope of the divisor is not full-dimensional");
    const Integer fact = detail::factorial(fan.dim - 1);
    RatVector t;
    for (std::size_t i = 0; i < fan.ray_count(); ++i) {
        auto [sub, subb] = detail::facet_system(fan.rays, a, i);
        t.push_back(Rational(fact) * detail::lattice_volume(std::move(sub), std::move(subb), fan.dim - 1));
    }
    Polarization pol = validate_polarization(fan, t);
    pol.source = PolarizationSource::Divisor;
    pol.divisor = a;
    return pol;
}

inline Polarization weights_from_divisor(const Fan& fan, const IntVector& a) { return weights_from_divisor(fan, to_rational(a)); }

inline Divisor c1(const ToricBundle& b, const Subspace& f) { return {to_rational(first_chern_coefficients(b, f))}; }

inline Rational slope(const ToricBundle& b, const Subspace& f, const Polarization& pol) {
    Rational s = c1(b, f).pair_with(pol.weights);
    s /= static_cast<long>(f.dim());
    return s;
}

enum class Order { Less, Equal, Greater };

inline const char* to_string(Order o) {
    switch (o) {
    case Order::Less: return "less";
    case Order::Equal: return "equal";
    default: return "greater";
    }
}

inline Order compare_rationals(const Rational& a, const Rational& b) { return a < b ? Order::Less : a == b ? Order::Equal : Order::Greater; }

/// P1 <_α P2 iff sum c1_i t_i < sum c2_i t_i.
inline Order compare_average_polytopes(const HPolytope& p1, const HPolytope& p2, const Polarization& pol) {
    if (p1.normals() != p2.normals()) throw InputError("compare: polytopes live on different fans");
    if (p1.bounds().size() != pol.weights.size()) throw InputError("compare: weights do not match the fan");
    return compare_rationals(dot(p1.bounds(), pol.weights), dot(p2.bounds(), pol.weights));
}

struct FlatSlope {
    Flat flat;
    Rational slope;
    Order relation = Order::Equal; // against μ(E)
    HPolytope average;
};

struct StabilityReport {
    Rational mu;
    bool stable = false;
    bool semistable = false;
    GroundSet ground_set;
    std::vector<FlatSlope> flats; // proper nonzero flats, in (rank, indices) order
    std::optional<std::size_t> witness; // index into flats

    const FlatSlope* witness_flat() const { return witness ? &flats[*witness] : nullptr; }
};

inline StabilityReport check_stability(const ToricBundle& b, const Polarization& pol, std::uint64_t seed = 0, const GroundSetOptions& opts = {}) {
    validate_polarization(b.fan(), pol.weights);
    require_compatible(b, seed);
    StabilityReport rep;
    rep.ground_set = ground_set(b, opts);
    rep.mu = slope(b, Subspace::full(b.rank()), pol);
    rep.stable = rep.semistable = true;
    for (auto& f : enumerate_flats(rep.ground_set)) {
        if (!is_proper_nonzero(f, rep.ground_set)) continue;
        const Rational s = slope(b, f.span, pol);
        const Order rel = compare_rationals(s, rep.mu);
        if (rel != Order::Less) rep.stable = false;
        if (rel == Order::Greater) rep.semistable = false;
        HPolytope avg = average_polytope(b, f.span);
        rep.flats.push_back({std::move(f), s, rel, std::move(avg)});
    }
    for (std::size_t k = 0; k < rep.flats.size(); ++k) {
        if (!rep.witness) {
            rep.witness = k;
            continue;
        }
        const auto& w = rep.flats[*rep.witness];
        const auto& c = rep.flats[k];
        if (c.slope > w.slope || (c.slope == w.slope && c.flat.rank() > w.flat.rank())) rep.witness = k;
    }
    return rep;
}

/// max t_i <= (sum t_i)/d, or < with `strict`. Requires a fan without opposite rays.
inline bool tangent_weight_condition(const Fan& fan, const Polarization& pol, bool strict = false) {
    for (const auto& v : fan.rays) {
        IntVector w = v;
        for (auto& x : w) x = -x;
        if (std::find(fan.rays.begin(), fan.rays.end(), w) != fan.rays.end())
            throw InputError("tangent_weight_condition: fan has a pair of opposite rays");
    }
    if (pol.weights.size() != fan.ray_count()) throw InputError("tangent_weight_condition: weights do not match the fan");
    Rational sum = 0, top = pol.weights.front();
    for (const auto& t : pol.weights) sum += t, top = std::max(top, t);
    sum /= static_cast<long>(fan.dim);
    return strict ? top < sum : top <= sum;
}

struct CurveSegment {
    IntVector from; // character of σ
    IntVector to;   // character of σ'
    Integer degree;
    std::optional<std::size_t> label;
};

struct Restriction {
    Wall wall;
    IntVector normal; // m_τ, with <m_τ, extra ray of σ> > 0
    std::vector<CurveSegment> segments;
    std::vector<Integer> degrees; // sorted
    bool semistable = false;
};

/// Splitting type of E restricted to the invariant curve of a wall.
inline Restriction restrict_to_curve(const ToricBundle& b, const Wall& w, std::uint64_t seed = 0) {
    const Fan& fan = b.fan();
    const std::size_t r = b.rank();
    for (auto i : w.tau_rays)
        if (!fan.cone_contains(w.sigma, i) || !fan.cone_contains(w.sigma_prime, i)) throw InputError("restrict: wall rays not in both cones");
    if (w.tau_rays.size() + 1 != fan.dim || w.extra_ray_sigma == w.extra_ray_sigma_prime) throw InputError("restrict: malformed wall");

    Restriction res;
    res.wall = w;
    RatMatrix tau_rows;
    for (auto i : w.tau_rays) tau_rows.push_back(to_rational(fan.rays[i]));
    const auto ns = nullspace(tau_rows, fan.dim);
    if (ns.size() != 1) throw InputError("restrict: wall rays are not independent");
    res.normal = primitive_integer_vector(ns[0]);
    const Integer side = int_dot(res.normal, fan.rays[w.extra_ray_sigma]);
    if (side == 0) throw VerificationFailure("restrict: extra ray of sigma lies on the wall");
    if (side < 0)
        for (auto& x : res.normal) x = -x;

    const Parliament par = parliament(b, seed);
    auto annotations_of = [&](std::size_t cone) -> const ConeAnnotation& {
        for (const auto& ca : par.annotations)
            if (ca.cone == cone) return ca;
        throw VerificationFailure("restrict: cone missing from the character sheet");
    };
    const auto& ann_s = annotations_of(w.sigma);
    const auto& ann_t = annotations_of(w.sigma_prime);
    auto profile = [&](const IntVector& u) {
        std::vector<Integer> p;
        for (auto i : w.tau_rays) p.push_back(int_dot(u, fan.rays[i]));
        return p;
    };
    std::map<std::vector<Integer>, long long> count_s, count_t;
    for (const auto& a : ann_s.entries) ++count_s[profile(a.character)];
    for (const auto& a : ann_t.entries) ++count_t[profile(a.character)];
    if (count_s != count_t) throw VerificationFailure("restrict: tau-profiles of the two cones differ");

    const Filtration& fs = b.filtration(w.extra_ray_sigma);
    const Filtration& ft = b.filtration(w.extra_ray_sigma_prime);
    auto solve_on = [&](std::size_t cone, const std::vector<Integer>& p, std::size_t extra, const Integer& level) {
        IntVector rhs;
        for (auto i : fan.max_cones[cone]) {
            if (i == extra) {
                rhs.push_back(level);
                continue;
            }
            const auto it = std::find(w.tau_rays.begin(), w.tau_rays.end(), i);
            rhs.push_back(p[static_cast<std::size_t>(it - w.tau_rays.begin())]);
        }
        return solve_integer_system(fan.cone_rays(cone), rhs);
    };

    std::vector<IntVector> emitted_s, emitted_t;
    for (const auto& [p, mult] : count_s) {
        Subspace graded = detail::profile_space(b, w.tau_rays, p);
        Subspace k(r);
        for (std::size_t m = 0; m < w.tau_rays.size(); ++m) {
            auto q = p;
            q[m] += 1;
            k = subspace_sum(k, detail::profile_space(b, w.tau_rays, q));
        }
        const auto ls = fs.thresholds(), lt = ft.thresholds();
        for (long long n = 0; n < mult; ++n) {
            std::optional<std::pair<Integer, Integer>> pick;
            Subspace x;
            for (auto i = ls.rbegin(); i != ls.rend() && !pick; ++i) {
                const Subspace a = subspace_sum(intersect(fs.value(*i), graded), k);
                if (a.dim() == k.dim()) continue;
                for (auto j = lt.rbegin(); j != lt.rend() && !pick; ++j) {
                    x = intersect(a, subspace_sum(intersect(ft.value(*j), graded), k));
                    if (x.dim() > k.dim()) pick = std::make_pair(*i, *j);
                }
            }
            if (!pick) throw VerificationFailure("restrict: greedy pairing found no admissible level pair");
            for (const auto& v : x.basis())
                if (!k.contains(v)) {
                    k = subspace_sum(k, Subspace::line(v));
                    break;
                }
            const IntVector u = solve_on(w.sigma, p, w.extra_ray_sigma, pick->first);
            const IntVector u2 = solve_on(w.sigma_prime, p, w.extra_ray_sigma_prime, pick->second);
            emitted_s.push_back(u);
            emitted_t.push_back(u2);
            IntVector diff(fan.dim);
            for (std::size_t c = 0; c < fan.dim; ++c) diff[c] = u[c] - u2[c];
            std::size_t nz = 0;
            while (res.normal[nz] == 0) ++nz;
            const Integer deg = diff[nz] / res.normal[nz];
            for (std::size_t c = 0; c < fan.dim; ++c)
                if (diff[c] != deg * res.normal[c]) throw VerificationFailure("restrict: paired characters differ off the wall normal");
            std::optional<std::size_t> label;
            for (const auto& a : ann_s.entries)
                if (a.character == u) {
                    label = a.label;
                    break;
                }
            res.segments.push_back({u, u2, deg, label});
            res.degrees.push_back(deg);
        }
        if (!(k == graded)) throw VerificationFailure("restrict: pairing did not exhaust a graded piece");
    }
    auto sorted_chars = [](const ConeAnnotation& ca) {
        std::vector<IntVector> u;
        for (const auto& a : ca.entries) u.push_back(a.character);
        std::sort(u.begin(), u.end());
        return u;
    };
    std::sort(emitted_s.begin(), emitted_s.end());
    std::sort(emitted_t.begin(), emitted_t.end());
    if (emitted_s != sorted_chars(ann_s) || emitted_t != sorted_chars(ann_t))
        throw VerificationFailure("restrict: emitted pairs do not reproduce the associated characters");
    std::sort(res.degrees.begin(), res.degrees.end());
    res.semistable = res.degrees.front() == res.degrees.back();
    return res;
}

/// Largest slope over random proper subspaces of every intermediate dimension;
/// nullopt when nothing was sampled.
inline std::optional<Rational> brute_force_max_slope(const ToricBundle& b, const Polarization& pol, int samples, std::uint64_t seed) {
    const std::size_t r = b.rank();
    if (samples <= 0 || r < 2) return std::nullopt;
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> coeff(-5, 5);
    const SubspaceLattice lattice = build_lattice(b);
    std::vector<Subspace> pieces;
    for (const auto& v : lattice.elements)
        if (!v.is_zero()) pieces.push_back(v);
    std::optional<Rational> best;
    for (std::size_t dim = 1; dim < r; ++dim) {
        for (int s = 0; s < samples; ++s) {
            RatMatrix rows;
            for (std::size_t n = 0; n < dim; ++n) {
                if (s % 2 == 1) {
                    // lattice-structured: a random vector inside a random element of L(E)
                    std::uniform_int_distribution<std::size_t> pick(0, pieces.size() - 1);
                    rows.push_back(detail::random_vector_in(pieces[pick(rng)], rng));
                } else {
                    RatVector v(r);
                    for (auto& x : v) x = coeff(rng);
                    rows.push_back(std::move(v));
                }
            }
            const Subspace f = Subspace::span(rows, r);
            if (f.is_zero() || f.is_full()) continue;
            const Rational mu = slope(b, f, pol);
            if (!best || mu > *best) best = mu;
        }
    }
    return best;
}

} // namespace toricstab
