#include <random>
#include <set>

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "random_bundles.hpp"
#include "toricstab/parliament.hpp"
#include "toricstab/stability.hpp"
#include "toricstab/svg.hpp"

using namespace toricstab;

namespace {

RatVector rv(std::initializer_list<long> xs) {
    RatVector v;
    for (long x : xs) v.emplace_back(x);
    return v;
}

IntVector iv(std::initializer_list<long> xs) {
    IntVector v;
    for (long x : xs) v.emplace_back(x);
    return v;
}

RatVector half(long a, long b) { return {Rational(a) / 2, Rational(b) / 2}; }

std::vector<RatVector> sorted(std::vector<RatVector> v) {
    std::sort(v.begin(), v.end());
    return v;
}

Fan p2() { return fixtures::load("p2").fan; }

std::size_t count(const std::string& s, const std::string& what) {
    std::size_t n = 0;
    for (auto p = s.find(what); p != std::string::npos; p = s.find(what, p + 1)) ++n;
    return n;
}

} // namespace

TEST(PolytopeOf, TangentPlaneGenerator) {
    const auto p = polytope_of(fixtures::bundle("tp2"), rv({1, 0}));
    EXPECT_EQ(p.bounds(), rv({0, 1, 0}));
    EXPECT_EQ(p.vertices(), sorted({rv({0, 0}), rv({1, 0}), rv({1, -1})}));
    EXPECT_EQ(p.lattice_points(), (std::vector<IntVector>{iv({0, 0}), iv({1, -1}), iv({1, 0})}));
}

TEST(PolytopeOf, SplitSummand) {
    // fiber coordinate 0 carries O(D1 + D2)
    const auto p = polytope_of(fixtures::bundle("split_p2"), rv({1, 0}));
    EXPECT_EQ(p.vertices(), sorted({rv({1, 1}), rv({-1, 1}), rv({1, -1})}));
}

TEST(PolytopeOf, Errors) {
    const auto b = fixtures::bundle("tp2");
    EXPECT_THROW(polytope_of(b, rv({0, 0})), InputError);
    EXPECT_THROW(polytope_of(b, rv({1, 0, 0})), InputError);
    EXPECT_THROW(polytope_of(b, rv({1, 0}), Subspace::line(rv({0, 1}))), InputError);
}

TEST(PolytopeOf, SubspaceArgumentKeepsBounds) {
    const auto b = fixtures::bundle("nontriv_rank3");
    const auto f = Subspace::span(RatMatrix{rv({1, 0, 0}), rv({0, 0, 1})}, 3);
    EXPECT_EQ(polytope_of(b, rv({1, 0, -1}), f), polytope_of(b, rv({1, 0, -1})));
}

TEST(HPolytope, EmptyAndLatticeFree) {
    EXPECT_TRUE(newton_polytope(p2(), iv({-1, 0, 0})).is_empty());
    EXPECT_TRUE(polytope_of(line_bundle(p2(), iv({-1, 0, 0})), rv({1})).is_empty());
    EXPECT_TRUE(newton_polytope(p2(), iv({-1, -1, -1})).is_empty());
    const HPolytope thin(p2().rays, {Rational(1), Rational(-1, 3), Rational(-1, 3)});
    EXPECT_FALSE(thin.is_empty());
    EXPECT_TRUE(thin.lattice_points().empty());
    EXPECT_TRUE(thin.contains(RatVector{Rational(-1, 2), Rational(-1, 2)}));
}

TEST(HPolytope, ConstructionErrors) {
    EXPECT_THROW(HPolytope(IntMatrix{iv({1, 0})}, {}), InputError);
    EXPECT_THROW(HPolytope(IntMatrix{}, {}), InputError);
    EXPECT_THROW(HPolytope((IntMatrix{iv({1, 0}), iv({1})}), rv({0, 0})), InputError);
}

TEST(Newton, Examples) {
    EXPECT_EQ(newton_polytope(p2(), iv({1, 0, 0})).vertices(), sorted({rv({0, 0}), rv({-1, 0}), rv({0, -1})}));
    const Fan bl = fixtures::load("blp2_sum").fan;
    EXPECT_EQ(newton_polytope(bl, iv({0, 2, 0, -1})).vertices(), sorted({rv({1, 0}), rv({2, 0}), rv({2, -2}), rv({1, -1})}));
    EXPECT_EQ(newton_polytope(p2(), iv({0, 0, 0})).vertices(), (std::vector<RatVector>{rv({0, 0})}));
    EXPECT_THROW(newton_polytope(p2(), iv({0, 0})), InputError);
}

TEST(Average, Examples) {
    const auto t = fixtures::bundle("tp2");
    const auto full = average_polytope(t, Subspace::full(2));
    EXPECT_EQ(full.bounds(), (RatVector{Rational(1, 2), Rational(1, 2), Rational(1, 2)}));
    EXPECT_EQ(full.vertices(), sorted({half(1, 1), half(-2, 1), half(1, -2)}));
    EXPECT_EQ(average_polytope(t, Subspace::line(rv({1, 0}))), newton_polytope(p2(), iv({0, 1, 0})));
    const auto s3 = average_polytope(fixtures::bundle("split3_p2"), Subspace::full(3));
    EXPECT_EQ(s3.bounds(), (RatVector{Rational(1, 3), Rational(1, 3), Rational(1, 3)}));
    EXPECT_THROW(average_polytope(t, Subspace(2)), InputError);
}

TEST(Average, RankOneFlatEqualsGenerator) {
    for (const auto& name : fixtures::stable_suite()) {
        const auto b = fixtures::bundle(name);
        const auto g = ground_set(b);
        for (const auto& f : enumerate_flats(g))
            if (f.rank() == 1 && f.indices.size() == 1)
                ASSERT_EQ(average_polytope(b, f.span), polytope_of(b, g.vectors[f.indices[0]])) << name;
    }
}

TEST(Parliament, TangentPlane) {
    const auto p = parliament(fixtures::bundle("tp2"));
    ASSERT_EQ(p.polytopes.size(), 3u);
    ASSERT_EQ(p.annotations.size(), 3u);
    const auto& c0 = p.annotations[0];
    EXPECT_EQ(c0.cone, 0u);
    ASSERT_EQ(c0.entries.size(), 2u);
    for (const auto& a : c0.entries) {
        ASSERT_TRUE(a.label.has_value());
        const auto& e = p.ground_set.vectors[*a.label];
        if (a.character == iv({1, 0})) EXPECT_EQ(Subspace::line(e), Subspace::line(rv({1, 0})));
        else if (a.character == iv({0, 1})) EXPECT_EQ(Subspace::line(e), Subspace::line(rv({0, 1})));
        else ADD_FAILURE() << "unexpected character";
    }
}

TEST(Parliament, BlowupQuadrilaterals) {
    const auto p = parliament(fixtures::bundle("blp2_sum"));
    ASSERT_EQ(p.polytopes.size(), 2u);
    for (const auto& poly : p.polytopes) EXPECT_EQ(poly.vertices().size(), 4u);
    const auto e0 = polytope_of(fixtures::bundle("blp2_sum"), rv({1, 0}));
    EXPECT_EQ(e0.vertices(), sorted({rv({0, 0}), rv({-1, 0}), rv({-1, -3}), rv({0, -4})}));
}

TEST(Parliament, RankOneIsNewtonPolytope) {
    const auto p = parliament(line_bundle(p2(), iv({2, 1, 0})));
    ASSERT_EQ(p.polytopes.size(), 1u);
    EXPECT_EQ(p.polytopes[0], newton_polytope(p2(), iv({2, 1, 0})));
}

TEST(Parliament, AnnotationsPerCone) {
    for (const auto& name : fixtures::stable_suite()) {
        const auto b = fixtures::bundle(name);
        const auto p = parliament(b);
        ASSERT_EQ(p.annotations.size(), b.fan().max_cones.size());
        for (const auto& ca : p.annotations) ASSERT_EQ(ca.entries.size(), b.rank());
    }
}

TEST(Parliament, EachHyperplaneUsedOnce) {
    // u sits on the facet of its own polytope for every ray of its cone
    for (const auto& name : fixtures::stable_suite()) {
        const auto b = fixtures::bundle(name);
        const auto p = parliament(b);
        for (const auto& ca : p.annotations)
            for (const auto& a : ca.entries) {
                ASSERT_TRUE(a.label.has_value()) << name;
                for (auto i : b.fan().max_cones[ca.cone])
                    ASSERT_EQ(Rational(int_dot(a.character, b.fan().rays[i])), p.polytopes[*a.label].bounds()[i]) << name;
            }
    }
}

TEST(GlobalGeneration, Examples) {
    EXPECT_TRUE(is_globally_generated(fixtures::bundle("tp2")));
    EXPECT_FALSE(is_globally_generated(line_bundle(p2(), iv({-1, 0, 0}))));
    EXPECT_TRUE(is_globally_generated(line_bundle(p2(), iv({0, 0, 0}))));
}

TEST(Reconstruct, RoundTrips) {
    for (const auto& b : {fixtures::bundle("tp2"), line_bundle(p2(), iv({1, 0, 0})), fixtures::bundle("split_p2")}) {
        const auto p = parliament(b);
        ASSERT_TRUE(is_globally_generated(p));
        EXPECT_EQ(reconstruct_filtrations(p), b.filtrations());
    }
}

TEST(Reconstruct, RefusesNonGenerated) {
    EXPECT_THROW(reconstruct_filtrations(parliament(line_bundle(p2(), iv({-1, 0, 0})))), InputError);
}

TEST(Translation, TwistByCharacterMovesEveryPolytope) {
    std::mt19937_64 rng(12);
    for (const auto& name : fixtures::stable_suite()) {
        const auto b = fixtures::bundle(name);
        const IntVector u = randomized::random_divisor(b.fan().dim, rng);
        const auto t = twist_by_character(b, u);
        for (const auto& e : ground_set(b).vectors) {
            auto moved = polytope_of(b, e).vertices();
            for (auto& v : moved)
                for (std::size_t k = 0; k < v.size(); ++k) v[k] += u[k];
            std::sort(moved.begin(), moved.end());
            ASSERT_EQ(polytope_of(t, e).vertices(), moved) << name;
            ASSERT_EQ(polytope_of(t, e), polytope_of(b, e).translated(u)) << name;
        }
    }
}

TEST(HPolytope, VerticesAreTightAndLatticePointsMatchScan) {
    std::mt19937_64 rng(99);
    std::uniform_int_distribution<int> c(-6, 6);
    const std::vector<Fan> fans{p2(), fixtures::load("blp2_sum").fan, fixtures::load("hirzebruch_h2").fan};
    for (int n = 0; n < 100; ++n) {
        const Fan& f = fans[n % fans.size()];
        RatVector bounds;
        for (std::size_t i = 0; i < f.ray_count(); ++i) bounds.emplace_back(c(rng), 2);
        for (auto& x : bounds) x.canonicalize();
        const HPolytope p(f.rays, bounds);
        for (const auto& v : p.vertices()) {
            RatMatrix tight;
            for (std::size_t i = 0; i < f.ray_count(); ++i)
                if (dot(v, f.rays[i]) == bounds[i]) tight.push_back(to_rational(f.rays[i]));
            ASSERT_GE(oracle::minor_rank(tight, 2), 2u);
        }
        std::vector<IntVector> scan;
        for (int x = -12; x <= 12; ++x)
            for (int y = -12; y <= 12; ++y)
                if (p.contains(iv({x, y}))) scan.push_back(iv({x, y}));
        ASSERT_EQ(p.lattice_points(), scan) << n;
    }
}

TEST(Svg, TangentPlaneLayout) {
    const auto p = parliament(fixtures::bundle("tp2"));
    const auto svg = render_svg(p);
    EXPECT_EQ(svg, render_svg(p));
    EXPECT_EQ(count(svg, "fill-opacity"), 3u);
    EXPECT_NE(svg.find("cone 0 (rays 1 2)"), std::string::npos);
    EXPECT_EQ(svg.rfind("</svg>\n"), svg.size() - 7);
}

TEST(Svg, EmptyPolytopeIsLabelOnly) {
    const auto p = parliament(line_bundle(p2(), iv({-1, 0, 0})));
    const auto svg = render_svg(p);
    EXPECT_NE(svg.find("empty</text>"), std::string::npos);
    EXPECT_EQ(count(svg, "fill-opacity"), 0u);
}

TEST(Svg, WallSegmentsAndDimensionCheck) {
    const auto b = fixtures::bundle("blp2_sum");
    SvgOptions opt;
    for (const auto& s : restrict_to_curve(b, walls(b.fan())[0]).segments) opt.segments.push_back({s.from, s.to});
    EXPECT_EQ(count(render_svg(parliament(b), opt), "stroke=\"#d62728\""), 2u);
    EXPECT_THROW(render_svg(parliament(fixtures::bundle("tp3"))), InputError);
}
