#include <bspace/manybody.hpp>
#include <bspace/twostate.hpp>

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

using namespace bspace;

namespace {

std::vector<SingleElectronChannel> random_channels(std::size_t n, std::mt19937_64& rng)
{
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<SingleElectronChannel> out;
    for (std::size_t j = 0; j < n; ++j)
        out.push_back({std::polar(std::sqrt(u(rng)), 2 * std::numbers::pi * u(rng)), j + 1});
    return out;
}

} // namespace

TEST(ProductAmplitude, SingleElectron)
{
    const std::complex<double> a{0.3, -0.4};
    EXPECT_EQ(product_amplitude({{a, 1}}), a);
}

TEST(ProductAmplitude, TwoImaginaryUnits)
{
    const auto p = product_amplitude({{{0.0, 1.0}, 1}, {{0.0, 1.0}, 2}});
    EXPECT_EQ(p, std::complex<double>(-1.0, 0.0));
    EXPECT_EQ(std::norm(p), 1.0);
}

TEST(ProductAmplitude, ComposesTwoStateElectrons)
{
    const std::vector<double> rs = {0.5, std::numbers::pi / 2, 2.718};
    std::vector<SingleElectronChannel> channels;
    double expected = 1.0;
    for (std::size_t j = 0; j < rs.size(); ++j) {
        const DriveParameters d{rs[j], 1.0};
        channels.push_back({amplitudes_degenerate(d, 0.25).a21, j + 1});
        expected *= transition_probability(d, 0.25);
    }
    EXPECT_NEAR(std::norm(product_amplitude(channels)), expected, 1e-15);
    EXPECT_NEAR(expected, std::pow(std::sin(0.5), 2) * std::pow(std::sin(2.718), 2), 1e-15);
}

TEST(ProductAmplitude, Errors)
{
    EXPECT_THROW(product_amplitude({}), UsageError);
    EXPECT_THROW(product_amplitude({{{1.0, 0.5}, 1}}), ValidationError);
}

TEST(CorrelationIndex, ExactProduct)
{
    const auto rec = correlation_index(0.36, {0.6, 0.6});
    EXPECT_NEAR(rec.deviation, 0.0, 1e-16);
    ASSERT_TRUE(rec.ratio.has_value());
    EXPECT_NEAR(*rec.ratio, 1.0, 1e-15);
    EXPECT_TRUE(rec.independent(1e-15));
}

TEST(CorrelationIndex, CorrelatedPair)
{
    const auto rec = correlation_index(0.5, {0.6, 0.6});
    EXPECT_NEAR(rec.deviation, 0.14, 1e-15);
    EXPECT_NEAR(*rec.ratio, 0.5 / 0.36, 1e-15);
    EXPECT_FALSE(rec.independent(1e-3));
}

TEST(CorrelationIndex, RatioOmittedForZeroProduct)
{
    const auto rec = correlation_index(0.1, {0.0, 0.7});
    EXPECT_FALSE(rec.ratio.has_value());
    EXPECT_NEAR(rec.deviation, 0.1, 1e-16);
}

TEST(CorrelationIndex, OutOfRangeRejected)
{
    EXPECT_THROW(correlation_index(1.2, {0.5}), ValidationError);
    EXPECT_THROW(correlation_index(0.2, {0.5, -0.1}), ValidationError);
    EXPECT_THROW(correlation_index(std::nan(""), {0.5}), ValidationError);
    EXPECT_THROW(correlation_index(0.2, {}), UsageError);
}

TEST(CorrelationIndex, ProductStatesAreIndependent)
{
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 1000; ++trial) {
        const auto channels = random_channels(1 + trial % 8, rng);
        const auto rec = product_correlation(channels);
        EXPECT_LT(std::abs(rec.deviation), 1e-15);
    }
}

TEST(CorrelationIndex, PermutationInvariant)
{
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<double> singles(2 + trial % 5);
        for (auto& p : singles)
            p = u(rng);
        const double joint = u(rng);
        const double reference = correlation_index(joint, singles).deviation;
        std::sort(singles.begin(), singles.end());
        do {
            EXPECT_NEAR(correlation_index(joint, singles).deviation, reference, 1e-15);
        } while (singles.size() <= 4 && std::next_permutation(singles.begin(), singles.end()));
    }
}

TEST(CorrelationIndex, Bounds)
{
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 2000; ++trial) {
        std::vector<double> singles(1 + trial % 6);
        for (auto& p : singles)
            p = u(rng);
        const auto rec = correlation_index(u(rng), singles);
        EXPECT_LE(std::abs(rec.deviation), 1.0);
        if (rec.ratio)
            EXPECT_GE(*rec.ratio, 0.0);
    }
    EXPECT_EQ(correlation_index(1.0, {0.0}).deviation, 1.0);
    EXPECT_EQ(correlation_index(0.0, {1.0, 1.0}).deviation, -1.0);
}
