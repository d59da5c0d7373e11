#include <gtest/gtest.h>

#include "properties.hpp"

namespace {

std::string join(const properties::Violations& v) {
    std::string s;
    for (const auto& x : v) s += x + "\n";
    return s;
}

} // namespace

TEST(Properties, ReductionToFlats) {
    const auto v = properties::reduction_to_flats(60);
    EXPECT_TRUE(v.empty()) << join(v);
}

TEST(Properties, WeightConditionEquivalenceOnSurfaces) {
    std::size_t fans = 0, tried = 0;
    const auto v = properties::weight_condition_equivalence(8, fans, tried);
    EXPECT_TRUE(v.empty()) << join(v);
    EXPECT_GE(fans, 5u);
    EXPECT_GE(tried, 5u * 8u);
}

TEST(Properties, TwistAndScaling) {
    const auto v = properties::twist_and_scaling(3, 2);
    EXPECT_TRUE(v.empty()) << join(v);
}

TEST(Properties, ReconstructionRoundTrip) {
    std::size_t checked = 0;
    const auto v = properties::reconstruction_round_trip(checked);
    EXPECT_TRUE(v.empty()) << join(v);
    EXPECT_GE(checked, 3u);
}

TEST(Properties, TraversalInvariance) {
    const auto v = properties::traversal_invariance(10);
    EXPECT_TRUE(v.empty()) << join(v);
}

TEST(Properties, LineConditionMatchesOperationWithoutOppositeRays) {
    std::mt19937_64 rng(5);
    const toricstab::Fan p2 = randomized::surface_fans()[0];
    for (const auto& w : properties::balanced_weights(p2, 10, rng))
        EXPECT_EQ(properties::line_weight_condition(p2, w), toricstab::tangent_weight_condition(p2, toricstab::validate_polarization(p2, w)));
}

TEST(Properties, SkewedWeightsExistOnSomeSurface) {
    // the equivalence is only meaningful if both outcomes occur
    std::mt19937_64 rng(2024);
    std::size_t yes = 0, no = 0;
    for (const toricstab::Fan& f : randomized::surface_fans())
        for (const auto& w : properties::balanced_weights(f, 20, rng))
            (properties::line_weight_condition(f, w) ? yes : no)++;
    EXPECT_GT(yes, 0u);
    EXPECT_GT(no, 0u);
}
