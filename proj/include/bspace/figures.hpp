#pragma once

// Tabular datasets behind the CLI subcommands, plus deterministic CSV output.

#include <bspace/beam.hpp>
#include <bspace/channels.hpp>
#include <bspace/errors.hpp>
#include <bspace/twostate.hpp>

#include <fmt/format.h>

#include <cmath>
#include <numbers>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

namespace bspace {

struct Dataset {
    std::vector<std::pair<std::string, std::string>> metadata;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;

    std::size_t column(const std::string& name) const
    {
        for (std::size_t i = 0; i < columns.size(); ++i)
            if (columns[i] == name)
                return i;
        throw UsageError("dataset: no column '" + name + "'");
    }

    std::vector<double> values(const std::string& name) const
    {
        const std::size_t c = column(name);
        std::vector<double> out;
        out.reserve(rows.size());
        for (const auto& r : rows)
            out.push_back(r[c]);
        return out;
    }
};

/// Shortest round-trip representation, so identical doubles give identical bytes.
inline std::string format_number(double v) { return fmt::format("{}", v); }

inline void write_csv(std::ostream& out, const Dataset& data)
{
    for (const auto& [key, value] : data.metadata)
        out << "# " << key << '=' << value << '\n';
    for (std::size_t i = 0; i < data.columns.size(); ++i)
        out << (i ? "," : "") << data.columns[i];
    out << '\n';
    for (const auto& row : data.rows) {
        for (std::size_t i = 0; i < row.size(); ++i)
            out << (i ? "," : "") << format_number(row[i]);
        out << '\n';
    }
}

/// tau_i = start + i (end - start) / intervals, i = 0..intervals.
inline std::vector<double> uniform_samples(double start, double end, std::size_t intervals)
{
    if (intervals < 1)
        throw ValidationError("samples: need at least one interval");
    std::vector<double> out(intervals + 1);
    for (std::size_t i = 0; i <= intervals; ++i)
        out[i] = i == intervals ? end : start + (end - start) * (double(i) / double(intervals));
    return out;
}

/// P(tau) for a single drive: closed form next to the integrated value.
inline Dataset fig2_dataset(double r = 2.718, std::size_t intervals = 1000,
                            const EvolveOptions& options = {})
{
    const DriveParameters drive = DriveParameters::from_ratio(r);
    const ChannelBasis basis({0.0, 0.0});
    EvolveOptions opts = options;
    opts.samples = intervals;
    const auto traj = evolve(basis, Interaction::two_state(drive.coupling_strength), {}, {0.0, 1.0},
                             AmplitudeVector::basis_state(2, 0), opts);
    Dataset d;
    d.metadata = {{"figure", "fig2"},
                  {"R", format_number(drive.coupling_strength)},
                  {"samples", std::to_string(intervals)},
                  {"tolerance", format_number(opts.tolerance)}};
    d.columns = {"tau", "P", "P_ode"};
    for (const auto& a : traj)
        d.rows.push_back({a.time, transition_probability(drive, a.time), a.probability(1)});
    return d;
}

inline Dataset fig3_dataset(std::size_t intervals = 1000)
{
    constexpr double pi = std::numbers::pi;
    const DriveParameters half{0.5, 1.0}, halfpi{pi / 2, 1.0}, full{pi, 1.0};
    Dataset d;
    d.metadata = {{"figure", "fig3"},
                  {"R", "0.5,pi/2,pi"},
                  {"samples", std::to_string(intervals)}};
    d.columns = {"tau", "P_half", "P_halfpi", "P_pi"};
    for (double tau : uniform_samples(0.0, 1.0, intervals))
        d.rows.push_back({tau, transition_probability(half, tau), transition_probability(halfpi, tau),
                          transition_probability(full, tau)});
    return d;
}

/// Transfer probability across a Gaussian beam at fixed tau. Rows are uniform
/// in R from R(0) down to (excluding) 0; b/w0 follows from R(b) = R(0) exp(-b^2/w0^2)
/// and P is evaluated through the coupling map at that b.
inline Dataset fig4_dataset(const BeamProfile& beam, double r0 = 1.5 * std::numbers::pi,
                            std::size_t intervals = 999, double tau = 0.25)
{
    if (beam.kind() != BeamKind::Gaussian)
        throw ValidationError("fig4: requires a Gaussian beam");
    if (!(r0 > 0.0))
        throw ValidationError("fig4: R(0) must be positive");
    const CouplingMap map(beam, r0, ImpactParameter{});
    std::vector<ImpactParameter> points;
    std::vector<double> b_over_w0;
    for (std::size_t i = 0; i < intervals; ++i) {
        const double r = r0 * (1.0 - double(i) / double(intervals));
        const double x = std::sqrt(std::log(r0 / r));
        b_over_w0.push_back(x);
        points.push_back(ImpactParameter{x * beam.waist(), 0.0});
    }
    const auto scan = transfer_scan(map, points, tau);
    Dataset d;
    d.metadata = {{"figure", "fig4"},
                  {"R0", format_number(r0)},
                  {"tau", format_number(tau)},
                  {"samples", std::to_string(intervals)}};
    d.columns = {"R", "b_over_w0", "P"};
    for (std::size_t i = 0; i < scan.size(); ++i)
        d.rows.push_back({scan[i].coupling, b_over_w0[i], scan[i].probability});
    return d;
}

/// Gaussian intensity ratio against theta_V(b) / theta_V(w0), uniform in b/w0 on [0, 1].
inline Dataset fig5_dataset(const BeamProfile& beam, std::size_t intervals = 100)
{
    if (beam.kind() != BeamKind::Gaussian)
        throw ValidationError("fig5: requires a Gaussian beam");
    const double w0 = beam.waist();
    const double zr = beam.rayleigh_range();
    const double theta_w0 = vortex_angle(w0, zr);
    const double i0 = beam.peak_intensity();
    Dataset d;
    d.metadata = {{"figure", "fig5"},
                  {"wavelength", format_number(beam.wavelength())},
                  {"waist", format_number(w0)},
                  {"rayleigh_range", format_number(zr)},
                  {"samples", std::to_string(intervals)}};
    d.columns = {"theta_ratio", "intensity_ratio"};
    for (double x : uniform_samples(0.0, 1.0, intervals)) {
        const double b = x * w0;
        d.rows.push_back({vortex_angle(b, zr) / theta_w0, beam.intensity({b, 0.0}) / i0});
    }
    return d;
}

/// Radial cut at fixed azimuth: b, theta_V, I / I_peak, field phase.
inline Dataset beam_profile_dataset(const BeamProfile& beam, double b_max_over_w0 = 2.0,
                                    std::size_t intervals = 200, double azimuth = 0.0)
{
    if (!(b_max_over_w0 > 0.0))
        throw ValidationError("beam-profile: b_max must be positive");
    const double peak = beam.peak_intensity();
    Dataset d;
    d.metadata = {{"kind", to_string(beam.kind())},
                  {"wavelength", format_number(beam.wavelength())},
                  {"waist", format_number(beam.waist())},
                  {"rayleigh_range", format_number(beam.rayleigh_range())},
                  {"oam", std::to_string(beam.oam_index())},
                  {"radial", std::to_string(beam.radial_index())},
                  {"azimuth", format_number(azimuth)}};
    d.columns = {"b", "theta_V", "intensity_ratio", "phase"};
    for (double x : uniform_samples(0.0, b_max_over_w0, intervals)) {
        const double b = x * beam.waist();
        const auto point = ImpactParameter::polar(b, azimuth);
        const double ratio = peak > 0.0 ? beam.intensity(point) / peak : 0.0;
        d.rows.push_back({b, vortex_angle(b, beam.rayleigh_range()), ratio,
                          std::arg(beam.field_amplitude(point))});
    }
    return d;
}

inline Dataset evolve_dataset(const ChannelBasis& basis, const Interaction& interaction,
                              TimeSpan span, const AmplitudeVector& initial,
                              const EvolveOptions& options = {})
{
    const auto traj = evolve(basis, interaction, {}, span, initial, options);
    const std::size_t n = basis.size();
    Dataset d;
    d.metadata = {{"channels", std::to_string(n)},
                  {"t_start", format_number(span.start)},
                  {"t_end", format_number(span.end)},
                  {"tolerance", format_number(options.tolerance)}};
    d.columns = {"t_over_T"};
    for (std::size_t s = 0; s < n; ++s) {
        d.columns.push_back("re_a" + basis.labels()[s]);
        d.columns.push_back("im_a" + basis.labels()[s]);
    }
    for (std::size_t s = 0; s < n; ++s)
        d.columns.push_back("P_" + basis.labels()[s]);
    d.columns.push_back("norm");
    for (const auto& a : traj) {
        std::vector<double> row{a.time};
        for (Eigen::Index s = 0; s < Eigen::Index(n); ++s) {
            row.push_back(a.amplitudes(s).real());
            row.push_back(a.amplitudes(s).imag());
        }
        for (std::size_t s = 0; s < n; ++s)
            row.push_back(a.probability(s));
        row.push_back(a.norm());
        d.rows.push_back(std::move(row));
    }
    return d;
}

} // namespace bspace
