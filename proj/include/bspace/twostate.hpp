#pragma once

// Degenerate two-state atom under a cos(2 pi t / T) drive: closed-form amplitudes.
// Everything is expressed through the dimensionless coupling R = H12 T / h and
// the reduced time tau = t / T.

#include <bspace/beam.hpp>
#include <bspace/errors.hpp>

#include <cmath>
#include <complex>
#include <numbers>
#include <utility>
#include <vector>

namespace bspace {

/// Planck constant in eV s, used only to turn (H12, T) into R.
inline constexpr double planck_ev_s = 4.135667696e-15;

struct DriveParameters {
    double coupling_strength = 0.0; ///< R = H12 T / h
    double period = 1.0;            ///< T; only enters when converting physical time

    static DriveParameters from_ratio(double r, double period = 1.0)
    {
        if (!std::isfinite(r))
            throw ValidationError("drive: R must be finite");
        if (!(period > 0.0))
            throw ValidationError("drive: period must be positive");
        // The sign of H12 is a phase and never changes a probability.
        return {std::abs(r), period};
    }

    /// H12 in eV, T in seconds.
    static DriveParameters from_physical(double h12_ev, double period_s)
    {
        if (!(period_s > 0.0))
            throw ValidationError("drive: period must be positive");
        return from_ratio(h12_ev * period_s / planck_ev_s, period_s);
    }
};

struct TwoStateAmplitudes {
    std::complex<double> a11;
    std::complex<double> a21;
};

/// a11 = cos[R sin(2 pi tau)], a21 = +i sin[R sin(2 pi tau)].
///
/// The +i follows the published closed form; direct integration of the
/// coupled equations gives the complex conjugate (-i), which leaves every
/// probability unchanged.
inline TwoStateAmplitudes amplitudes_degenerate(const DriveParameters& params, double tau)
{
    const double phase = params.coupling_strength * std::sin(2.0 * std::numbers::pi * tau);
    return {{std::cos(phase), 0.0}, {0.0, std::sin(phase)}};
}

/// sin^2[R sin(2 pi tau)]
inline double transition_probability(const DriveParameters& params, double tau)
{
    const double s = std::sin(params.coupling_strength * std::sin(2.0 * std::numbers::pi * tau));
    return s * s;
}

/// R(b) = R_ref |E(b)| / |E(b_ref)|: the dipole coupling follows the field,
/// i.e. the square root of the intensity.
class CouplingMap {
public:
    CouplingMap(BeamProfile profile, double reference_strength, ImpactParameter reference)
        : profile_(std::move(profile)), reference_strength_(reference_strength),
          reference_(reference)
    {
        if (!(reference_strength >= 0.0) || !std::isfinite(reference_strength))
            throw ValidationError("coupling map: reference R must be finite and nonnegative");
        reference_field_ = std::abs(profile_.field_amplitude(reference_));
        if (!(reference_field_ > 0.0))
            throw ValidationError("coupling map: beam field vanishes at the reference point");
    }

    /// Reference taken at the intensity maximum of the profile.
    static CouplingMap at_peak(const BeamProfile& profile, double peak_strength)
    {
        return CouplingMap(profile, peak_strength,
                           ImpactParameter::polar(profile.peak_radius(), 0.0));
    }

    double operator()(const ImpactParameter& b) const
    {
        return reference_strength_ * std::abs(profile_.field_amplitude(b)) / reference_field_;
    }

    const BeamProfile& profile() const { return profile_; }
    double reference_strength() const { return reference_strength_; }
    const ImpactParameter& reference() const { return reference_; }

private:
    BeamProfile profile_;
    double reference_strength_;
    ImpactParameter reference_;
    double reference_field_ = 1.0;
};

struct TransferSample {
    ImpactParameter b;
    double coupling;
    double probability;
};

inline std::vector<TransferSample> transfer_scan(const CouplingMap& map,
                                                 const std::vector<ImpactParameter>& b_samples,
                                                 double tau = 0.25)
{
    if (b_samples.empty())
        throw UsageError("transfer_scan: no impact parameters given");
    std::vector<TransferSample> out;
    out.reserve(b_samples.size());
    for (const auto& b : b_samples) {
        const double r = map(b);
        out.push_back({b, r, transition_probability(DriveParameters{r, 1.0}, tau)});
    }
    return out;
}

struct MaximumShape {
    double first_derivative;
    double second_derivative;
};

/// Central differences of P(tau) about tau = 1/4 with step 1e-5. Both
/// derivatives vanish for R = odd * pi/2 (flat-topped maximum).
inline MaximumShape broad_maximum_indicator(const DriveParameters& params)
{
    constexpr double tau0 = 0.25;
    constexpr double h = 1e-5;
    const double pm = transition_probability(params, tau0 - h);
    const double p0 = transition_probability(params, tau0);
    const double pp = transition_probability(params, tau0 + h);
    return {(pp - pm) / (2.0 * h), (pp - 2.0 * p0 + pm) / (h * h)};
}

} // namespace bspace
