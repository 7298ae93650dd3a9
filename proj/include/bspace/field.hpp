#pragma once

// Uniform centered 2-D grids and complex sample fields on them.

#include <bspace/errors.hpp>

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

namespace bspace {

/// n x n points at -L, -L + d, ..., L - d with d = 2L/n; the origin sits at index n/2.
class TransverseGrid {
public:
    TransverseGrid(std::size_t n, double extent) : n_(n), extent_(extent)
    {
        if (n < 8 || (n & (n - 1)) != 0)
            throw ValidationError("grid: points per axis must be a power of two >= 8, got " +
                                  std::to_string(n));
        if (!(extent > 0.0) || !std::isfinite(extent))
            throw ValidationError("grid: extent must be finite and positive");
    }

    std::size_t size() const { return n_; }
    double extent() const { return extent_; }
    double spacing() const { return 2.0 * extent_ / double(n_); }
    double coordinate(std::size_t i) const { return -extent_ + double(i) * spacing(); }
    std::size_t origin_index() const { return n_ / 2; }

    /// Fourier-conjugate grid: spacing(conjugate) = pi / extent.
    TransverseGrid conjugate() const
    {
        return TransverseGrid(n_, std::numbers::pi * double(n_) / (2.0 * extent_));
    }

    bool operator==(const TransverseGrid&) const = default;

private:
    std::size_t n_;
    double extent_;
};

enum class Space { B, Q };

inline std::string to_string(Space s) { return s == Space::B ? "b" : "q"; }

/// Complex samples of a(b) or f(q). Row-major, x index fastest: samples[iy * n + ix].
class AmplitudeField {
public:
    AmplitudeField(TransverseGrid grid, Space space, double wave_number)
        : AmplitudeField(grid, space, wave_number,
                         std::vector<std::complex<double>>(grid.size() * grid.size()))
    {
    }

    AmplitudeField(TransverseGrid grid, Space space, double wave_number,
                   std::vector<std::complex<double>> samples)
        : grid_(grid), space_(space), k_(wave_number), samples_(std::move(samples))
    {
        if (!(wave_number > 0.0) || !std::isfinite(wave_number))
            throw ValidationError("field: wave number must be finite and positive");
        if (samples_.size() != grid_.size() * grid_.size())
            throw ValidationError("field: sample count does not match grid");
    }

    /// Fill from a callable f(x, y) -> complex.
    template <typename Fn>
    static AmplitudeField sample(TransverseGrid grid, Space space, double wave_number, Fn&& fn)
    {
        AmplitudeField out(grid, space, wave_number);
        const std::size_t n = grid.size();
        for (std::size_t iy = 0; iy < n; ++iy)
            for (std::size_t ix = 0; ix < n; ++ix)
                out.samples_[iy * n + ix] = fn(grid.coordinate(ix), grid.coordinate(iy));
        return out;
    }

    const TransverseGrid& grid() const { return grid_; }
    Space space() const { return space_; }
    double wave_number() const { return k_; }
    std::size_t size() const { return grid_.size(); }

    std::complex<double>& at(std::size_t ix, std::size_t iy) { return samples_[iy * size() + ix]; }
    const std::complex<double>& at(std::size_t ix, std::size_t iy) const
    {
        return samples_[iy * size() + ix];
    }

    std::vector<std::complex<double>>& samples() { return samples_; }
    const std::vector<std::complex<double>>& samples() const { return samples_; }

private:
    TransverseGrid grid_;
    Space space_;
    double k_;
    std::vector<std::complex<double>> samples_;
};

} // namespace bspace
