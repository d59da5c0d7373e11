#pragma once

// Property checks shared by the unit suite and the acceptance binary. Each
// returns the list of violations found; empty means the property held.

#include <random>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "fixtures.hpp"
#include "random_bundles.hpp"
#include "toricstab/matroid.hpp"
#include "toricstab/parliament.hpp"
#include "toricstab/stability.hpp"

namespace properties {

using namespace toricstab;
using Violations = std::vector<std::string>;

inline Rational max_flat_slope(const StabilityReport& rep) {
    return rep.witness_flat() ? rep.witness_flat()->slope : rep.mu;
}

/// Random subspaces never beat the best flat.
inline Violations reduction_to_flats(int samples) {
    Violations v;
    std::uint64_t seed = 1;
    for (const auto& name : fixtures::stable_suite()) {
        const auto b = fixtures::bundle(name);
        const auto pol = fixtures::polarization(name);
        const auto rep = check_stability(b, pol);
        if (rep.flats.empty()) continue;
        const auto best = brute_force_max_slope(b, pol, samples, seed++);
        if (best && *best > max_flat_slope(rep)) v.push_back(name + ": sampled slope " + to_string(*best) + " exceeds " + to_string(max_flat_slope(rep)));
    }
    return v;
}

/// Balanced weights with every entry positive or with one of several zero patterns.
inline std::vector<RatVector> balanced_weights(const Fan& f, std::size_t count, std::mt19937_64& rng) {
    std::vector<RatVector> out;
    std::uniform_int_distribution<int> c(0, 5);
    std::uniform_int_distribution<std::size_t> pick(0, f.ray_count() - 1);
    int guard = 0;
    while (out.size() < count && ++guard < 100000) {
        const std::size_t i = pick(rng), j = pick(rng);
        const auto& a = f.rays[i];
        const auto& b = f.rays[j];
        const Integer det = a[0] * b[1] - a[1] * b[0];
        if (det == 0) continue;
        RatVector t(f.ray_count());
        for (auto& x : t) x = c(rng);
        t[i] = t[j] = 0;
        const RatVector s = balance_vector(f, t);
        // solve x a + y b = -s
        const Rational x = Rational(-s[0] * b[1] + s[1] * b[0]) / Rational(det);
        const Rational y = Rational(-a[0] * s[1] + a[1] * s[0]) / Rational(det);
        if (x < 0 || y < 0) continue;
        t[i] = x;
        t[j] = y;
        try {
            validate_polarization(f, t);
        } catch (const InputError&) {
            continue;
        }
        out.push_back(t);
    }
    return out;
}

/// The rank-1 flats of a surface tangent bundle are the lines through rays, and
/// the slope of a line is the total weight of the rays on it. Semistable iff no
/// line outweighs the mean. Same inequality as tangent_weight_condition when no
/// ray has an opposite; with opposite pairs the two weights add up.
inline bool line_weight_condition(const Fan& f, const RatVector& t) {
    Rational total = 0;
    for (const auto& x : t) total += x;
    const Rational mean = total / 2;
    for (std::size_t i = 0; i < f.ray_count(); ++i) {
        Rational line = 0;
        for (std::size_t j = 0; j < f.ray_count(); ++j)
            if (f.rays[i][0] * f.rays[j][1] == f.rays[i][1] * f.rays[j][0]) line += t[j];
        if (line > mean) return false;
    }
    return true;
}

/// Weight inequality against the general checker on surface tangent bundles.
/// Fans without opposite rays go through tangent_weight_condition itself; the
/// others through line_weight_condition, after confirming the operation refuses
/// them. Reports the number of fans and weight vectors tried.
inline Violations weight_condition_equivalence(std::size_t per_fan, std::size_t& fans_used, std::size_t& tried) {
    Violations v;
    std::mt19937_64 rng(2024);
    fans_used = tried = 0;
    for (const Fan& f : randomized::surface_fans()) {
        if (!validate_fan(f).pass()) continue;
        const bool opposite = randomized::has_opposite_rays(f);
        ++fans_used;
        const auto t = tangent_bundle(f);
        for (const auto& w : balanced_weights(f, per_fan, rng)) {
            ++tried;
            const Polarization pol = validate_polarization(f, w);
            bool cond = line_weight_condition(f, w);
            if (!opposite) {
                cond = tangent_weight_condition(f, pol);
            } else {
                try {
                    tangent_weight_condition(f, pol);
                    v.push_back("fan with " + std::to_string(f.ray_count()) + " rays: opposite rays not refused");
                } catch (const InputError&) {
                }
            }
            const bool semi = check_stability(t, pol).semistable;
            if (cond != semi) {
                std::string s;
                for (const auto& x : w) s += to_string(x) + " ";
                v.push_back("fan with " + std::to_string(f.ray_count()) + " rays, weights " + s);
            }
        }
    }
    return v;
}

inline std::tuple<bool, bool, std::vector<std::size_t>> verdict(const StabilityReport& r) {
    return {r.stable, r.semistable, r.witness_flat() ? r.witness_flat()->flat.indices : std::vector<std::size_t>{}};
}

/// Verdicts and witness flats survive twisting by divisors and scaling weights.
inline Violations twist_and_scaling(int divisors, int scalings) {
    Violations v;
    std::mt19937_64 rng(606);
    std::uniform_int_distribution<int> num(1, 9), den(1, 7);
    for (const auto& name : fixtures::stable_suite()) {
        const auto b = fixtures::bundle(name);
        const auto pol = fixtures::polarization(name);
        const auto ref = verdict(check_stability(b, pol));
        for (int n = 0; n < divisors; ++n) {
            const auto a = randomized::random_divisor(b.fan().ray_count(), rng, 4);
            if (verdict(check_stability(twist_by_divisor(b, a), pol)) != ref) v.push_back(name + ": twist changed the verdict");
        }
        for (int n = 0; n < scalings; ++n) {
            const Rational lambda = Rational(num(rng)) / den(rng);
            Polarization p = pol;
            for (auto& t : p.weights) t *= lambda;
            const auto rep = check_stability(b, p);
            if (verdict(rep) != ref) v.push_back(name + ": scaling changed the verdict");
            const auto base = check_stability(b, pol);
            for (std::size_t k = 0; k < rep.flats.size(); ++k)
                if (rep.flats[k].relation != base.flats[k].relation) v.push_back(name + ": scaling changed an order relation");
        }
    }
    return v;
}

/// parliament then reconstruction recovers every filtration exactly.
inline Violations reconstruction_round_trip(std::size_t& checked) {
    Violations v;
    checked = 0;
    for (const auto& name : fixtures::stable_suite()) {
        const auto b = fixtures::bundle(name);
        const auto p = parliament(b);
        if (!is_globally_generated(p)) continue;
        ++checked;
        try {
            if (reconstruct_filtrations(p) != b.filtrations()) v.push_back(name + ": filtrations differ");
        } catch (const std::exception& e) {
            v.push_back(name + ": " + e.what());
        }
    }
    return v;
}

/// Abstract shape of the flat lattice: for each flat its rank, size and the
/// number of flats below it, as a multiset; plus the ranks of covering pairs.
inline std::multiset<std::tuple<std::size_t, std::size_t, std::size_t, std::size_t>> flat_shape(const GroundSet& g) {
    const auto flats = enumerate_flats(g);
    std::multiset<std::tuple<std::size_t, std::size_t, std::size_t, std::size_t>> s;
    for (const auto& f : flats) {
        std::size_t below = 0, above = 0;
        for (const auto& h : flats) {
            below += f.span.contains(h.span);
            above += h.span.contains(f.span);
        }
        s.insert({f.rank(), f.indices.size(), below, above});
    }
    return s;
}

/// Randomized traversal orders of the lattice do not change |G|, the flat
/// lattice or any verdict.
inline Violations traversal_invariance(int orders) {
    Violations v;
    for (const auto& name : fixtures::stable_suite()) {
        const auto b = fixtures::bundle(name);
        const auto pol = fixtures::polarization(name);
        const auto lattice = build_lattice(b);
        const auto ref_g = compute_ground_set(lattice);
        const auto ref_shape = flat_shape(ref_g);
        const auto ref = check_stability(b, pol);
        for (int n = 1; n <= orders; ++n) {
            const GroundSetOptions opts{std::nullopt, static_cast<std::uint64_t>(n)};
            const auto g = compute_ground_set(lattice, opts);
            if (g.size() != ref_g.size()) v.push_back(name + ": |G| changed");
            else if (flat_shape(g) != ref_shape) v.push_back(name + ": flat lattice changed");
            const auto rep = check_stability(b, pol, 0, opts);
            if (rep.stable != ref.stable || rep.semistable != ref.semistable) v.push_back(name + ": verdict changed");
            if (max_flat_slope(rep) != max_flat_slope(ref)) v.push_back(name + ": max flat slope changed");
        }
    }
    return v;
}

} // namespace properties
