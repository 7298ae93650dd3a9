#include <bspace/beam.hpp>

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace bspace;
using std::numbers::pi;

TEST(RayleighRange, ConstantsCancel)
{
    EXPECT_DOUBLE_EQ(rayleigh_range(pi, 1.0), 1.0);
}

TEST(RayleighRange, MicronWaist)
{
    // pi * 1e-10 / 5e-7
    EXPECT_NEAR(rayleigh_range(5e-7, 1e-5), 6.283185307179586e-4, 1e-18);
}

TEST(RayleighRange, WaistRoundTrip)
{
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> exponent(-9.0, 0.0);
    for (int i = 0; i < 200; ++i) {
        const double lambda = std::pow(10.0, exponent(rng));
        const double w0 = std::pow(10.0, exponent(rng));
        const double back = std::sqrt(lambda * rayleigh_range(lambda, w0) / pi);
        EXPECT_NEAR(back / w0, 1.0, 1e-14);
        EXPECT_NEAR(waist_from_rayleigh(lambda, rayleigh_range(lambda, w0)) / w0, 1.0, 1e-14);
    }
}

TEST(RayleighRange, RejectsNonPositive)
{
    EXPECT_THROW(rayleigh_range(0.0, 1.0), ValidationError);
    EXPECT_THROW(rayleigh_range(1.0, -1.0), ValidationError);
    EXPECT_THROW(waist_from_rayleigh(1.0, 0.0), ValidationError);
    EXPECT_THROW(BeamProfile::gaussian(-1.0, 1.0), ValidationError);
}

TEST(VortexAngle, SpecialPoints)
{
    EXPECT_EQ(vortex_angle(0.0, 2.0), 0.0);
    EXPECT_NEAR(vortex_angle(2.0, 2.0), pi / 4, 1e-15);
}

TEST(VortexAngle, SmallAngleIsLinear)
{
    const double zr = 1.0;
    const double w0 = 0.01 * zr;
    const double theta = vortex_angle(w0, zr);
    EXPECT_NEAR(theta, 0.01, 1e-6);
    EXPECT_LT(std::abs(std::tan(theta) - theta) / theta, 1e-4);
}

TEST(VortexAngle, MonotoneAndBounded)
{
    double prev = -1.0;
    for (int i = 0; i <= 1000; ++i) {
        const double v = vortex_angle(i * 0.05, 3.0);
        EXPECT_GT(v, prev);
        EXPECT_LT(v, pi / 2);
        prev = v;
    }
}

TEST(VortexAngle, RejectsBadInput)
{
    EXPECT_THROW(vortex_angle(-1.0, 1.0), ValidationError);
    EXPECT_THROW(vortex_angle(1.0, 0.0), ValidationError);
}

TEST(Intensity, GaussianAtWaist)
{
    const auto g = BeamProfile::gaussian(8e-7, 1e-5, 3.0);
    const double ratio = g.intensity({1e-5, 0.0}) / g.intensity({});
    EXPECT_NEAR(ratio, std::exp(-2.0), 1e-15);
    EXPECT_NEAR(ratio, 0.1353, 1e-4);
}

TEST(Intensity, VortexNullOnAxis)
{
    for (int l : {-3, -1, 1, 2, 5})
        for (unsigned p : {0u, 1u, 2u})
            EXPECT_EQ(BeamProfile::laguerre_gauss(8e-7, 1e-5, l, p).intensity({}), 0.0);
}

TEST(Intensity, LG10PeakAtWaistOverRootTwo)
{
    const double w0 = 2.0;
    const auto lg = BeamProfile::laguerre_gauss(1.0, w0, 1, 0);
    const double found = oracle::scan_argmax(
        [&](double b) { return lg.intensity({b, 0.0}); }, 0.0, 3.0 * w0, 600000);
    EXPECT_NEAR(found, w0 / std::sqrt(2.0), 1e-4);
    EXPECT_NEAR(lg.peak_radius(), w0 / std::sqrt(2.0), 1e-15);
    EXPECT_NEAR(lg.peak_intensity(), lg.intensity({found, 0.0}), 1e-9);
}

TEST(Intensity, LGHigherRadialPeakMatchesScan)
{
    const auto lg = BeamProfile::laguerre_gauss(1.0, 1.0, 2, 2);
    const double found = oracle::scan_argmax(
        [&](double b) { return lg.intensity({b, 0.0}); }, 0.0, 5.0, 500000);
    EXPECT_NEAR(lg.peak_radius(), found, 1e-4);
    EXPECT_NEAR(lg.peak_intensity() / lg.intensity({found, 0.0}), 1.0, 1e-8);
}

TEST(Intensity, PlaneWaveConstant)
{
    const auto pw = BeamProfile::plane_wave(1.0, 1.0, 2.5);
    for (double b : {0.0, 1.0, 1e3, 1e9})
        EXPECT_EQ(pw.intensity({b, -b}), 6.25);
}

TEST(Intensity, GaussianIsotropicAndDecreasing)
{
    const auto g = BeamProfile::gaussian(1.0, 1.5);
    double prev = std::numeric_limits<double>::infinity();
    for (int i = 0; i <= 200; ++i) {
        const double b = i * 0.02;
        const double v = g.intensity({b, 0.0});
        EXPECT_LT(v, prev);
        prev = v;
        for (double phi : {0.3, 1.7, -2.9})
            EXPECT_NEAR(g.intensity(ImpactParameter::polar(b, phi)), v, 1e-15 * (1.0 + v));
    }
    EXPECT_EQ(g.intensity({1e3, 0.0}), 0.0);
}

TEST(Intensity, NonNegativeEverywhere)
{
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> coord(-5.0, 5.0);
    const BeamProfile profiles[] = {BeamProfile::plane_wave(1.0, 1.0),
                                    BeamProfile::gaussian(1.0, 1.0),
                                    BeamProfile::laguerre_gauss(1.0, 1.0, 3, 2),
                                    BeamProfile::laguerre_gauss(1.0, 1.0, -2, 1)};
    for (const auto& p : profiles)
        for (int i = 0; i < 500; ++i)
            EXPECT_GE(p.intensity({coord(rng), coord(rng)}), 0.0);
}

TEST(FieldAmplitude, PlaneWaveHasZeroPhase)
{
    const auto f = BeamProfile::plane_wave(1.0, 1.0, 1.7).field_amplitude({0.4, 9.0});
    EXPECT_EQ(f, std::complex<double>(1.7, 0.0));
}

TEST(FieldAmplitude, VortexWinding)
{
    const auto lg = BeamProfile::laguerre_gauss(1.0, 1.0, 2, 0);
    const auto at0 = lg.field_amplitude(ImpactParameter::polar(0.8, 0.0));
    const auto at90 = lg.field_amplitude(ImpactParameter::polar(0.8, pi / 2));
    double dphase = std::remainder(std::arg(at90) - std::arg(at0), 2 * pi);
    EXPECT_NEAR(std::abs(dphase), pi, 1e-12);

    // Total winding 2 pi l around a circle.
    const auto lg3 = BeamProfile::laguerre_gauss(1.0, 1.0, 3, 0);
    double winding = 0.0;
    const int steps = 720;
    for (int i = 0; i < steps; ++i) {
        const auto a = lg3.field_amplitude(ImpactParameter::polar(0.5, 2 * pi * i / steps));
        const auto b = lg3.field_amplitude(ImpactParameter::polar(0.5, 2 * pi * (i + 1) / steps));
        winding += std::arg(b / a);
    }
    EXPECT_NEAR(winding, 2 * pi * 3, 1e-9);
}

TEST(FieldAmplitude, SquaredMagnitudeIsIntensity)
{
    const BeamProfile profiles[] = {BeamProfile::plane_wave(1.0, 1.0, 0.7),
                                    BeamProfile::gaussian(1.0, 1.0, 2.0),
                                    BeamProfile::laguerre_gauss(1.0, 1.0, 1, 0),
                                    BeamProfile::laguerre_gauss(1.0, 1.3, -2, 3, 1.5)};
    for (const auto& p : profiles)
        for (int i = 0; i < 100; ++i) {
            const auto b = ImpactParameter::polar(0.03 * i, 0.1 * i);
            const double in = p.intensity(b);
            const double sq = std::norm(p.field_amplitude(b));
            EXPECT_NEAR(sq, in, 1e-12 * std::max(in, 1e-300));
        }
}

TEST(BeamProfile, RayleighConsistency)
{
    const auto p = BeamProfile::laguerre_gauss(6.3e-7, 2.2e-5, 1, 0);
    EXPECT_NEAR(p.rayleigh_range() * p.wavelength() / (pi * p.waist() * p.waist()), 1.0, 1e-14);
}

TEST(BeamProfile, IndicesOnlyForLaguerreGauss)
{
    EXPECT_NO_THROW(BeamProfile::laguerre_gauss(1.0, 1.0, 0, 0));
    EXPECT_THROW(BeamProfile::gaussian(1.0, 1.0, -1.0), ValidationError);
}

TEST(ImpactParameter, PolarRoundTrip)
{
    const auto b = ImpactParameter::polar(2.5, -1.2);
    EXPECT_NEAR(b.magnitude(), 2.5, 1e-15);
    EXPECT_NEAR(b.azimuth(), -1.2, 1e-15);
}
