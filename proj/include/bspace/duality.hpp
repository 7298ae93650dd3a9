#pragma once

// Transverse Fourier duality between the scattering amplitude f(q) and the
// impact-parameter amplitude a(b):
//
//   a(b) = -i / (2 pi k) * Integral exp(-i q.b) f(q) d^2q
//
// discretized on centered uniform grids. The raw 2-D DFT comes from FFTW; the
// (-1)^(ix+iy) modulations move the origin to the grid center.

#include <bspace/errors.hpp>
#include <bspace/field.hpp>

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <mutex>
#include <numbers>
#include <vector>

namespace bspace {

namespace detail {

// FFTW planning touches global state.
inline std::mutex& fftw_planner_mutex()
{
    static std::mutex m;
    return m;
}

inline void dft_2d(std::vector<std::complex<double>>& data, std::size_t n, int sign)
{
    std::vector<std::complex<double>> out(data.size());
    auto* in_ptr = reinterpret_cast<fftw_complex*>(data.data());
    auto* out_ptr = reinterpret_cast<fftw_complex*>(out.data());
    fftw_plan plan = nullptr;
    {
        std::lock_guard lock(fftw_planner_mutex());
        plan = fftw_plan_dft_2d(int(n), int(n), in_ptr, out_ptr, sign, FFTW_ESTIMATE);
    }
    fftw_execute(plan);
    {
        std::lock_guard lock(fftw_planner_mutex());
        fftw_destroy_plan(plan);
    }
    data.swap(out);
}

inline void checkerboard(std::vector<std::complex<double>>& data, std::size_t n,
                         std::complex<double> scale)
{
    for (std::size_t iy = 0; iy < n; ++iy)
        for (std::size_t ix = 0; ix < n; ++ix)
            data[iy * n + ix] *= ((ix + iy) & 1U) ? -scale : scale;
}

} // namespace detail

/// f(q) -> a(b) on the conjugate grid (spacing pi / L_q).
inline AmplitudeField q_to_b(const AmplitudeField& f)
{
    if (f.space() != Space::Q)
        throw UsageError("q_to_b: input field is not in q space");
    const std::size_t n = f.size();
    const double dq = f.grid().spacing();
    const double k = f.wave_number();
    std::vector<std::complex<double>> data = f.samples();
    detail::checkerboard(data, n, 1.0);
    detail::dft_2d(data, n, FFTW_FORWARD);
    const std::complex<double> prefactor{0.0, -dq * dq / (2.0 * std::numbers::pi * k)};
    detail::checkerboard(data, n, prefactor);
    return AmplitudeField(f.grid().conjugate(), Space::B, k, std::move(data));
}

/// a(b) -> f(q): exact discrete inverse of q_to_b.
inline AmplitudeField b_to_q(const AmplitudeField& a)
{
    if (a.space() != Space::B)
        throw UsageError("b_to_q: input field is not in b space");
    const std::size_t n = a.size();
    const TransverseGrid q_grid = a.grid().conjugate();
    const double dq = q_grid.spacing();
    const double k = a.wave_number();
    std::vector<std::complex<double>> data = a.samples();
    detail::checkerboard(data, n, 1.0);
    detail::dft_2d(data, n, FFTW_BACKWARD);
    // Undo -i dq^2 / (2 pi k) and the n^2 of the unnormalized backward DFT.
    const std::complex<double> inverse_prefactor{
        0.0, 2.0 * std::numbers::pi * k / (dq * dq * double(n) * double(n))};
    detail::checkerboard(data, n, inverse_prefactor);
    return AmplitudeField(q_grid, Space::Q, k, std::move(data));
}

/// sigma = Integral |a(b)|^2 d^2b
inline double cross_section_b(const AmplitudeField& a)
{
    if (a.space() != Space::B)
        throw UsageError("cross_section_b: input field is not in b space");
    const double db = a.grid().spacing();
    double sum = 0.0;
    for (const auto& v : a.samples())
        sum += std::norm(v);
    return sum * db * db;
}

/// sigma = k^-2 Integral |f(q)|^2 d^2q
///
/// d^2q / k^2 is the forward solid-angle element. This is the normalization
/// that agrees with cross_section_b under the -i/(2 pi k) transform above;
/// a (2 pi k)^-2 prefactor would be off by exactly (2 pi)^2.
inline double cross_section_q(const AmplitudeField& f)
{
    if (f.space() != Space::Q)
        throw UsageError("cross_section_q: input field is not in q space");
    const double dq = f.grid().spacing();
    const double k = f.wave_number();
    double sum = 0.0;
    for (const auto& v : f.samples())
        sum += std::norm(v);
    return sum * dq * dq / (k * k);
}

/// Largest magnitude on the outermost grid ring over the largest magnitude
/// anywhere; 0 for an all-zero field.
inline double boundary_ratio(const AmplitudeField& field)
{
    const std::size_t n = field.size();
    double peak = 0.0;
    double edge = 0.0;
    for (std::size_t iy = 0; iy < n; ++iy)
        for (std::size_t ix = 0; ix < n; ++ix) {
            const double m = std::abs(field.at(ix, iy));
            peak = std::max(peak, m);
            if (ix == 0 || iy == 0 || ix == n - 1 || iy == n - 1)
                edge = std::max(edge, m);
        }
    return peak > 0.0 ? edge / peak : 0.0;
}

inline constexpr double wraparound_threshold = 1e-12;

/// True when the field has not decayed enough at the boundary for the
/// periodic discretization to be faithful.
inline bool wraparound_warning(const AmplitudeField& field)
{
    return boundary_ratio(field) > wraparound_threshold;
}

/// Number of b-space samples with |a(b)| > 1. A nonzero count flags an
/// amplitude that cannot be a physical transition probability amplitude.
inline std::size_t unitarity_violations(const AmplitudeField& a)
{
    if (a.space() != Space::B)
        throw UsageError("unitarity_violations: input field is not in b space");
    return std::size_t(std::count_if(a.samples().begin(), a.samples().end(),
                                     [](std::complex<double> v) { return std::abs(v) > 1.0; }));
}

} // namespace bspace
