#pragma once

// Transverse beam models at the focal plane (paraxial, scalar field).

#include <bspace/errors.hpp>

#include <boost/math/tools/minima.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdlib>
#include <numbers>
#include <string>

namespace bspace {

/// Transverse displacement between beam axis and target center.
struct ImpactParameter {
    double bx = 0.0;
    double by = 0.0;

    static ImpactParameter polar(double b, double azimuth)
    {
        return {b * std::cos(azimuth), b * std::sin(azimuth)};
    }

    double magnitude() const { return std::hypot(bx, by); }
    double azimuth() const { return std::atan2(by, bx); }
};

enum class BeamKind { PlaneWave, Gaussian, LaguerreGauss };

inline std::string to_string(BeamKind kind)
{
    switch (kind) {
    case BeamKind::PlaneWave: return "plane";
    case BeamKind::Gaussian: return "gaussian";
    case BeamKind::LaguerreGauss: return "lg";
    }
    return "unknown";
}

/// z_R = pi w0^2 / lambda
inline double rayleigh_range(double wavelength, double waist)
{
    if (!(wavelength > 0.0) || !(waist > 0.0))
        throw ValidationError("rayleigh_range: wavelength and waist must be positive");
    return std::numbers::pi * waist * waist / wavelength;
}

/// Inverse of rayleigh_range: w0 = sqrt(lambda z_R / pi).
inline double waist_from_rayleigh(double wavelength, double rayleigh)
{
    if (!(wavelength > 0.0) || !(rayleigh > 0.0))
        throw ValidationError("waist_from_rayleigh: wavelength and Rayleigh range must be positive");
    return std::sqrt(wavelength * rayleigh / std::numbers::pi);
}

/// Asymptotic cone angle through impact parameter b, tan(theta_V) = b / z_R.
inline double vortex_angle(double b, double rayleigh)
{
    if (!(b >= 0.0) || !(rayleigh > 0.0))
        throw ValidationError("vortex_angle: need b >= 0 and z_R > 0");
    return std::atan(b / rayleigh);
}

/// Focal-plane beam profile. The Rayleigh range is always derived from
/// (wavelength, waist), so the two can never disagree.
///
/// Laguerre-Gauss modes carry no (p, l)-dependent normalization: the peak
/// field E0 is an overall scale and only intensity ratios are meaningful.
class BeamProfile {
public:
    static BeamProfile plane_wave(double wavelength, double waist, double peak_field = 1.0)
    {
        return BeamProfile(BeamKind::PlaneWave, wavelength, waist, 0, 0, peak_field);
    }

    static BeamProfile gaussian(double wavelength, double waist, double peak_field = 1.0)
    {
        return BeamProfile(BeamKind::Gaussian, wavelength, waist, 0, 0, peak_field);
    }

    static BeamProfile laguerre_gauss(double wavelength, double waist, int oam_index,
                                      unsigned radial_index, double peak_field = 1.0)
    {
        return BeamProfile(BeamKind::LaguerreGauss, wavelength, waist, oam_index, radial_index,
                           peak_field);
    }

    BeamKind kind() const { return kind_; }
    double wavelength() const { return wavelength_; }
    double waist() const { return waist_; }
    double rayleigh_range() const { return rayleigh_; }
    int oam_index() const { return oam_; }
    unsigned radial_index() const { return radial_; }
    double peak_field() const { return peak_field_; }

    /// Complex scalar field; |field|^2 == intensity, vortex modes wind as exp(i l phi).
    std::complex<double> field_amplitude(const ImpactParameter& b) const
    {
        switch (kind_) {
        case BeamKind::PlaneWave:
            return {peak_field_, 0.0};
        case BeamKind::Gaussian: {
            const double rho = b.magnitude() / waist_;
            return {peak_field_ * std::exp(-rho * rho), 0.0};
        }
        case BeamKind::LaguerreGauss: {
            const double rho = b.magnitude() / waist_;
            const double radial = lg_radial(rho);
            if (oam_ == 0)
                return {radial, 0.0};
            return std::polar(1.0, oam_ * b.azimuth()) * radial;
        }
        }
        return {};
    }

    double intensity(const ImpactParameter& b) const
    {
        if (kind_ == BeamKind::LaguerreGauss) {
            const double r = lg_radial(b.magnitude() / waist_);
            return r * r;
        }
        return std::norm(field_amplitude(b));
    }

    /// Maximum of the transverse intensity over the plane.
    double peak_intensity() const
    {
        return intensity(ImpactParameter{peak_radius(), 0.0});
    }

    /// |b| of the brightest ring (0 when the maximum sits on axis).
    double peak_radius() const
    {
        if (kind_ != BeamKind::LaguerreGauss)
            return 0.0;
        const unsigned m = static_cast<unsigned>(std::abs(oam_));
        if (radial_ == 0)
            return waist_ * std::sqrt(m / 2.0);
        // General p: scan u = 2 rho^2 for the brightest ring, then polish.
        auto ring = [&](double u) {
            const double l = std::assoc_laguerre(radial_, m, u);
            return std::pow(u, double(m)) * l * l * std::exp(-u);
        };
        const double u_max = 4.0 * (radial_ + m + 2);
        const int n_scan = 4000;
        double best_u = 0.0;
        double best = ring(0.0);
        for (int i = 1; i <= n_scan; ++i) {
            const double u = u_max * i / n_scan;
            if (const double v = ring(u); v > best) {
                best = v;
                best_u = u;
            }
        }
        const double du = u_max / n_scan;
        const auto found = boost::math::tools::brent_find_minima(
            [&](double u) { return -ring(u); }, std::max(0.0, best_u - du), best_u + du, 52);
        const double u = -found.second > best ? found.first : best_u;
        return waist_ * std::sqrt(u / 2.0);
    }

private:
    BeamProfile(BeamKind kind, double wavelength, double waist, int oam, unsigned radial,
                double peak_field)
        : kind_(kind), wavelength_(wavelength), waist_(waist),
          rayleigh_(bspace::rayleigh_range(wavelength, waist)), oam_(oam), radial_(radial),
          peak_field_(peak_field)
    {
        if (!(peak_field >= 0.0) || !std::isfinite(peak_field))
            throw ValidationError("beam: peak field must be finite and nonnegative");
        if (kind != BeamKind::LaguerreGauss && (oam != 0 || radial != 0))
            throw ValidationError("beam: OAM and radial indices apply to Laguerre-Gauss modes only");
    }

    // E0 (sqrt(2) rho)^|l| L_p^|l|(2 rho^2) exp(-rho^2)
    double lg_radial(double rho) const
    {
        const unsigned m = static_cast<unsigned>(std::abs(oam_));
        const double u = 2.0 * rho * rho;
        const double envelope = std::exp(-rho * rho);
        const double lag = radial_ == 0 ? 1.0 : std::assoc_laguerre(radial_, m, u);
        double power = 1.0;
        if (m > 0)
            power = std::pow(std::sqrt(2.0) * rho, double(m));
        return peak_field_ * power * lag * envelope;
    }

    BeamKind kind_;
    double wavelength_;
    double waist_;
    double rayleigh_;
    int oam_;
    unsigned radial_;
    double peak_field_;
};

inline double intensity(const BeamProfile& profile, const ImpactParameter& b)
{
    return profile.intensity(b);
}

inline std::complex<double> field_amplitude(const BeamProfile& profile, const ImpactParameter& b)
{
    return profile.field_amplitude(b);
}

} // namespace bspace
