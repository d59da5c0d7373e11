#pragma once

// Klyachko filtrations, the compatibility condition, associated characters and
// the standard bundle constructors.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "toricstab/exactla.hpp"
#include "toricstab/fan.hpp"

namespace toricstab {

struct FiltrationStep {
    Integer max_j;
    Subspace space;

    friend bool operator==(const FiltrationStep&, const FiltrationStep&) = default;
};

/// Decreasing Z-filtration of Q^r stored by its steps (A_k, V_k):
/// E(j) = V_k for A_{k-1} < j <= A_k, E(j) = V_1 = Q^r for j <= A_1 and
/// E(j) = 0 for j > A_s.
class Filtration {
public:
    Filtration() = default;

    Filtration(std::size_t rank, std::vector<FiltrationStep> steps) : rank_(rank), steps_(std::move(steps)) {
        if (steps_.empty()) throw InputError("filtration: no steps");
        if (!steps_.front().space.is_full() || steps_.front().space.ambient_dim() != rank)
            throw InputError("filtration: first step must be the full space");
        for (std::size_t k = 1; k < steps_.size(); ++k) {
            const auto& prev = steps_[k - 1];
            const auto& cur = steps_[k];
            if (cur.space.ambient_dim() != rank) throw InputError("filtration: step space has wrong ambient dimension");
            if (!(prev.max_j < cur.max_j)) throw InputError("filtration: thresholds must be strictly increasing");
            if (cur.space.is_zero()) throw InputError("filtration: step spaces must be nonzero");
            if (!prev.space.contains(cur.space) || prev.space.dim() == cur.space.dim())
                throw InputError("filtration: step spaces must be strictly decreasing");
        }
    }

    /// Normalizes the step function j -> values[k].second on (t_{k-1}, t_k]:
    /// zero spaces are dropped and equal consecutive spaces keep the later threshold.
    static Filtration from_values(std::size_t rank, std::vector<std::pair<Integer, Subspace>> values) {
        std::sort(values.begin(), values.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
        std::vector<FiltrationStep> steps;
        for (auto& [t, s] : values) {
            if (s.is_zero()) break;
            if (!steps.empty() && steps.back().space == s) {
                steps.back().max_j = t;
                continue;
            }
            steps.push_back({t, std::move(s)});
        }
        return Filtration(rank, std::move(steps));
    }

    std::size_t rank() const noexcept { return rank_; }
    const std::vector<FiltrationStep>& steps() const noexcept { return steps_; }

    std::vector<Integer> thresholds() const {
        std::vector<Integer> out;
        for (const auto& s : steps_) out.push_back(s.max_j);
        return out;
    }

    Subspace value(const Integer& j) const {
        for (const auto& s : steps_)
            if (j <= s.max_j) return s.space;
        return Subspace(rank_);
    }

    /// max{ j : e in E(j) } for nonzero e.
    Integer level_of(const RatVector& e) const {
        if (is_zero(e)) throw InputError("level_of: zero vector");
        Integer level = steps_.front().max_j;
        for (const auto& s : steps_) {
            if (!s.space.contains(e)) break;
            level = s.max_j;
        }
        return level;
    }

    /// Thresholds of the intersected filtration j -> E(j) ∩ F, with multiplicity.
    std::vector<Integer> jump_values(const Subspace& f) const {
        if (f.ambient_dim() != rank_) throw InputError("jump_values: ambient dimension mismatch");
        std::vector<std::size_t> dims;
        for (const auto& s : steps_) dims.push_back(intersect(s.space, f).dim());
        dims.push_back(0);
        std::vector<Integer> out;
        for (std::size_t k = 0; k < steps_.size(); ++k)
            for (std::size_t m = dims[k + 1]; m < dims[k]; ++m) out.push_back(steps_[k].max_j);
        return out;
    }

    Filtration shifted(const Integer& delta) const {
        Filtration f = *this;
        for (auto& s : f.steps_) s.max_j += delta;
        return f;
    }

    friend bool operator==(const Filtration&, const Filtration&) = default;

private:
    std::size_t rank_ = 0;
    std::vector<FiltrationStep> steps_;
};

/// Klyachko data: a fan and one filtration of Q^rank per ray.
class ToricBundle {
public:
    ToricBundle(Fan fan, std::size_t rank, std::vector<Filtration> filtrations, std::vector<std::size_t> summand = {})
        : fan_(std::move(fan)), rank_(rank), filtrations_(std::move(filtrations)), summand_(std::move(summand)) {
        check_fan_structure(fan_);
        if (rank_ == 0) throw InputError("bundle: rank must be positive");
        if (filtrations_.size() != fan_.ray_count())
            throw InputError("bundle: " + std::to_string(filtrations_.size()) + " filtrations for " +
                             std::to_string(fan_.ray_count()) + " rays");
        for (std::size_t i = 0; i < filtrations_.size(); ++i)
            if (filtrations_[i].rank() != rank_) throw InputError("bundle: filtration " + std::to_string(i) + " has wrong rank");
        if (summand_.empty()) summand_.assign(rank_, 0);
        if (summand_.size() != rank_) throw InputError("bundle: summand provenance has wrong length");
    }

    const Fan& fan() const noexcept { return fan_; }
    std::size_t rank() const noexcept { return rank_; }
    const std::vector<Filtration>& filtrations() const noexcept { return filtrations_; }
    const Filtration& filtration(std::size_t ray) const { return filtrations_.at(ray); }
    /// Direct-sum summand each fiber coordinate came from.
    const std::vector<std::size_t>& summand() const noexcept { return summand_; }

    friend bool operator==(const ToricBundle& a, const ToricBundle& b) {
        return a.fan_ == b.fan_ && a.rank_ == b.rank_ && a.filtrations_ == b.filtrations_;
    }

private:
    Fan fan_;
    std::size_t rank_;
    std::vector<Filtration> filtrations_;
    std::vector<std::size_t> summand_;
};

// ---- constructors ---------------------------------------------------------

inline ToricBundle line_bundle(const Fan& fan, const IntVector& divisor) {
    if (divisor.size() != fan.ray_count()) throw InputError("line_bundle: divisor length does not match ray count");
    std::vector<Filtration> fs;
    for (const auto& a : divisor) fs.emplace_back(1, std::vector<FiltrationStep>{{a, Subspace::full(1)}});
    return ToricBundle(fan, 1, std::move(fs));
}

inline ToricBundle tangent_bundle(const Fan& fan) {
    std::vector<Filtration> fs;
    for (const auto& v : fan.rays)
        fs.emplace_back(fan.dim, std::vector<FiltrationStep>{{0, Subspace::full(fan.dim)}, {1, Subspace::line(to_rational(v))}});
    return ToricBundle(fan, fan.dim, std::move(fs));
}

/// Block-diagonal direct sum; fiber coordinates of b2 follow those of b1.
inline ToricBundle direct_sum(const ToricBundle& b1, const ToricBundle& b2) {
    if (!(b1.fan() == b2.fan())) throw InputError("direct_sum: bundles live on different fans");
    const std::size_t r1 = b1.rank(), r2 = b2.rank(), r = r1 + r2;
    auto embed = [&](const Subspace& s1, const Subspace& s2) {
        RatMatrix rows;
        for (const auto& v : s1.basis()) {
            RatVector x(r, 0);
            std::copy(v.begin(), v.end(), x.begin());
            rows.push_back(std::move(x));
        }
        for (const auto& v : s2.basis()) {
            RatVector x(r, 0);
            std::copy(v.begin(), v.end(), x.begin() + static_cast<std::ptrdiff_t>(r1));
            rows.push_back(std::move(x));
        }
        return Subspace::span(rows, r);
    };
    std::vector<Filtration> fs;
    for (std::size_t i = 0; i < b1.fan().ray_count(); ++i) {
        const auto& f1 = b1.filtration(i);
        const auto& f2 = b2.filtration(i);
        std::vector<Integer> ts = f1.thresholds();
        for (const auto& t : f2.thresholds()) ts.push_back(t);
        std::sort(ts.begin(), ts.end());
        ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
        std::vector<std::pair<Integer, Subspace>> values;
        for (const auto& t : ts) values.emplace_back(t, embed(f1.value(t), f2.value(t)));
        fs.push_back(Filtration::from_values(r, std::move(values)));
    }
    std::vector<std::size_t> summand;
    const std::size_t shift = b1.summand().empty() ? 0 : *std::max_element(b1.summand().begin(), b1.summand().end()) + 1;
    summand = b1.summand();
    for (auto s : b2.summand()) summand.push_back(s + shift);
    return ToricBundle(b1.fan(), r, std::move(fs), std::move(summand));
}

inline ToricBundle twist_by_divisor(const ToricBundle& b, const IntVector& divisor) {
    if (divisor.size() != b.fan().ray_count()) throw InputError("twist_by_divisor: divisor length does not match ray count");
    std::vector<Filtration> fs;
    for (std::size_t i = 0; i < divisor.size(); ++i) fs.push_back(b.filtration(i).shifted(divisor[i]));
    return ToricBundle(b.fan(), b.rank(), std::move(fs), b.summand());
}

/// Tensoring by the character u shifts the threshold on ray i by <u, v_i>.
inline ToricBundle twist_by_character(const ToricBundle& b, const IntVector& u) {
    if (u.size() != b.fan().dim) throw InputError("twist_by_character: character has wrong dimension");
    IntVector shift;
    for (const auto& v : b.fan().rays) shift.push_back(int_dot(u, v));
    return twist_by_divisor(b, shift);
}

/// Coefficients of c_1 of the saturated subsheaf for F: per ray, the sum of the
/// jumps of the F-intersected filtration.
inline IntVector first_chern_coefficients(const ToricBundle& b, const Subspace& f) {
    if (f.is_zero()) throw InputError("c1: zero subspace");
    IntVector out;
    for (const auto& fil : b.filtrations()) {
        Integer s = 0;
        for (const auto& j : fil.jump_values(f)) s += j;
        out.push_back(s);
    }
    return out;
}

// ---- compatibility condition ---------------------------------------------

inline constexpr int kSplittingAttempts = 16;

/// A verified compatible basis of one maximal cone and the character of each line.
struct ConeSplitting {
    std::size_t cone = 0;
    RatMatrix basis;
    std::vector<IntVector> characters;
};

struct CharacterSheet {
    std::vector<ConeSplitting> cones;

    const ConeSplitting& at(std::size_t cone) const {
        for (const auto& c : cones)
            if (c.cone == cone) return c;
        throw InputError("character sheet: unknown cone " + std::to_string(cone));
    }
};

struct IncompatibilityWitness {
    std::size_t cone = 0;
    std::string reason;
    std::vector<Integer> profile; // empty unless a multiplicity is at fault
    long long multiplicity = 0;
};

struct CompatibilityResult {
    std::optional<CharacterSheet> sheet;
    std::optional<IncompatibilityWitness> witness;
    bool compatible() const noexcept { return sheet.has_value(); }
};

/// Steers the constructive phase: listed candidates are tried before random
/// draws, and vectors inside `inside` are taken before all others.
struct BasisPreference {
    RatMatrix candidates;
    std::optional<Subspace> inside;
};

/// Joint jump profile p over the rays of a cone, with its inclusion-exclusion
/// multiplicity m(p) = sum_S (-1)^|S| dim W_{p + e_S}.
struct ProfileClass {
    std::vector<Integer> profile;
    long long multiplicity = 0;
    Subspace space;  // W_p = ∩_k E^{i_k}(p_k)
    Subspace deeper; // sum_k W_{p + e_k}
};

namespace detail {

inline Subspace profile_space(const ToricBundle& b, const std::vector<std::size_t>& rays, const std::vector<Integer>& p) {
    Subspace w = Subspace::full(b.rank());
    for (std::size_t k = 0; k < rays.size() && !w.is_zero(); ++k) w = intersect(w, b.filtration(rays[k]).value(p[k]));
    return w;
}

inline RatVector random_vector_in(const Subspace& s, std::mt19937_64& rng) {
    std::uniform_int_distribution<int> coeff(-4, 4);
    RatVector x(s.ambient_dim(), 0);
    for (const auto& row : s.basis()) {
        const int c = coeff(rng);
        for (std::size_t k = 0; k < x.size(); ++k) x[k] += c * row[k];
    }
    return x;
}

} // namespace detail

/// Profiles over `rays` (default: the cone's rays) in processing order:
/// decreasing sum, then lexicographically decreasing.
inline std::vector<ProfileClass> profile_classes(const ToricBundle& b, const std::vector<std::size_t>& rays) {
    std::vector<std::vector<Integer>> levels;
    for (auto i : rays) levels.push_back(b.filtration(i).thresholds());
    std::vector<ProfileClass> out;
    std::vector<std::size_t> pos(rays.size(), 0);
    while (true) {
        ProfileClass pc;
        for (std::size_t k = 0; k < rays.size(); ++k) pc.profile.push_back(levels[k][pos[k]]);
        pc.space = detail::profile_space(b, rays, pc.profile);
        long long m = 0;
        pc.deeper = Subspace(b.rank());
        for (std::size_t mask = 0; mask < (std::size_t{1} << rays.size()); ++mask) {
            auto q = pc.profile;
            int bits = 0;
            for (std::size_t k = 0; k < rays.size(); ++k)
                if (mask >> k & 1U) {
                    q[k] += 1;
                    ++bits;
                }
            const Subspace w = detail::profile_space(b, rays, q);
            m += (bits % 2 == 0 ? 1 : -1) * static_cast<long long>(w.dim());
            if (bits == 1) pc.deeper = subspace_sum(pc.deeper, w);
        }
        pc.multiplicity = m;
        out.push_back(std::move(pc));
        std::size_t k = 0;
        while (k < rays.size() && ++pos[k] == levels[k].size()) pos[k++] = 0;
        if (k == rays.size()) break;
    }
    std::sort(out.begin(), out.end(), [](const ProfileClass& a, const ProfileClass& c) {
        const Integer sa = std::accumulate(a.profile.begin(), a.profile.end(), Integer(0));
        const Integer sc = std::accumulate(c.profile.begin(), c.profile.end(), Integer(0));
        if (sa != sc) return sa > sc;
        return a.profile > c.profile;
    });
    return out;
}

inline std::vector<ProfileClass> profile_classes(const ToricBundle& b, std::size_t cone) {
    return profile_classes(b, b.fan().max_cones.at(cone));
}

/// Checks the sum condition E^i(j) = sum_{<u, v_i> >= j} L_u verbatim on every
/// ray of the cone and returns the splitting with its characters.
inline std::optional<ConeSplitting> verify_splitting(const ToricBundle& b, std::size_t cone, const RatMatrix& basis) {
    const std::size_t r = b.rank();
    if (basis.size() != r || rank(basis, r) != r) return std::nullopt;
    const auto& rays = b.fan().max_cones.at(cone);
    std::vector<std::vector<Integer>> levels(basis.size());
    for (auto i : rays) {
        const auto& fil = b.filtration(i);
        for (std::size_t n = 0; n < basis.size(); ++n) levels[n].push_back(fil.level_of(basis[n]));
        for (const auto& step : fil.steps()) {
            RatMatrix lines;
            for (std::size_t n = 0; n < basis.size(); ++n)
                if (levels[n].back() >= step.max_j) lines.push_back(basis[n]);
            if (!(Subspace::span(lines, r) == step.space)) return std::nullopt;
        }
    }
    ConeSplitting s{cone, basis, {}};
    const IntMatrix a = b.fan().cone_rays(cone);
    for (const auto& lv : levels) s.characters.push_back(solve_integer_system(a, lv));
    return s;
}

inline std::optional<IncompatibilityWitness> multiplicity_witness(const ToricBundle& b, std::size_t cone,
                                                                  const std::vector<ProfileClass>& classes) {
    long long total = 0;
    for (const auto& pc : classes) {
        if (pc.multiplicity < 0) return IncompatibilityWitness{cone, "negative inclusion-exclusion multiplicity", pc.profile, pc.multiplicity};
        total += pc.multiplicity;
    }
    if (total != static_cast<long long>(b.rank()))
        return IncompatibilityWitness{cone, "profile multiplicities sum to " + std::to_string(total) + ", not the rank", {}, total};
    return std::nullopt;
}

/// One constructive attempt on one cone, seeded; nullopt if the draws did not
/// produce a verified splitting.
inline std::optional<ConeSplitting> split_cone(const ToricBundle& b, std::size_t cone, const std::vector<ProfileClass>& classes,
                                               std::uint64_t seed, int attempt, const BasisPreference& pref = {}) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), static_cast<std::uint32_t>(cone),
                      static_cast<std::uint32_t>(attempt)};
    std::mt19937_64 rng(seq);
    const std::size_t r = b.rank();
    RatMatrix basis;
    Subspace chosen(r);
    for (const auto& pc : classes) {
        if (pc.multiplicity <= 0) continue;
        long long need = pc.multiplicity;
        Subspace blocked = subspace_sum(chosen, pc.deeper);
        auto offer = [&](const RatVector& w) {
            if (need == 0 || is_zero(w) || blocked.contains(w)) return;
            const RatVector v = to_rational(primitive_integer_vector(w));
            basis.push_back(v);
            blocked = subspace_sum(blocked, Subspace::line(v));
            chosen = subspace_sum(chosen, Subspace::line(v));
            --need;
        };
        auto draw_from = [&](const Subspace& s) {
            for (const auto& c : pref.candidates)
                if (s.contains(c)) offer(c);
            for (int t = 0; t < 64 && need > 0 && !s.is_zero(); ++t) offer(detail::random_vector_in(s, rng));
        };
        if (pref.inside) draw_from(intersect(pc.space, *pref.inside));
        draw_from(pc.space);
        if (need > 0) return std::nullopt;
    }
    return verify_splitting(b, cone, basis);
}

/// Two-phase decision of the compatibility condition on every maximal cone.
/// Phase 1 rejects exactly by inclusion-exclusion; phase 2 builds a basis and
/// verifies it, retrying with fresh seeds.
inline CompatibilityResult check_compatibility(const ToricBundle& b, std::uint64_t seed = 0, const BasisPreference& pref = {}) {
    CompatibilityResult res;
    CharacterSheet sheet;
    for (std::size_t c = 0; c < b.fan().max_cones.size(); ++c) {
        const auto classes = profile_classes(b, c);
        if (auto w = multiplicity_witness(b, c, classes)) {
            res.witness = std::move(w);
            return res;
        }
        std::optional<ConeSplitting> s;
        for (int attempt = 0; attempt < kSplittingAttempts && !s; ++attempt) s = split_cone(b, c, classes, seed, attempt, pref);
        if (!s) {
            res.witness = IncompatibilityWitness{c, "no verified splitting after " + std::to_string(kSplittingAttempts) + " attempts", {}, 0};
            return res;
        }
        sheet.cones.push_back(std::move(*s));
    }
    res.sheet = std::move(sheet);
    return res;
}

inline CharacterSheet require_compatible(const ToricBundle& b, std::uint64_t seed = 0, const BasisPreference& pref = {}) {
    auto res = check_compatibility(b, seed, pref);
    if (!res.compatible()) throw IncompatibleBundle(res.witness->cone, res.witness->reason);
    return std::move(*res.sheet);
}

/// The multiset u(σ), sorted.
inline std::vector<IntVector> associated_characters(const ToricBundle& b, std::size_t cone, std::uint64_t seed = 0) {
    const auto sheet = require_compatible(b, seed);
    auto u = sheet.at(cone).characters;
    std::sort(u.begin(), u.end());
    return u;
}

} // namespace toricstab
