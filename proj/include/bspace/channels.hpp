#pragma once

// Coupled-channel amplitude equations in the interaction picture,
//
//   i da_f/dt = g(t) sum_s exp(i E_fs t) H_fs(b) a_s,
//
// in natural units hbar = 1 with time measured in drive periods T, so energies
// and couplings are in units of hbar/T (a dimensionless ratio X T / h maps to
// 2 pi X here).

#include <bspace/beam.hpp>
#include <bspace/errors.hpp>
#include <bspace/field.hpp>

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <exception>
#include <functional>
#include <mutex>
#include <numbers>
#include <string>
#include <thread>
#include <vector>

namespace bspace {

using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

/// Converts a dimensionless X T / h ratio into hbar/T units.
inline double from_ratio_units(double ratio) { return 2.0 * std::numbers::pi * ratio; }
inline double to_ratio_units(double natural) { return natural / (2.0 * std::numbers::pi); }

class ChannelBasis {
public:
    explicit ChannelBasis(std::vector<double> energies, std::vector<std::string> labels = {})
        : energies_(std::move(energies)), labels_(std::move(labels))
    {
        if (energies_.empty())
            throw ValidationError("channels: at least one channel required");
        for (double e : energies_)
            if (!std::isfinite(e))
                throw ValidationError("channels: energies must be finite");
        if (labels_.empty())
            for (std::size_t i = 0; i < energies_.size(); ++i)
                labels_.push_back(std::to_string(i + 1));
        if (labels_.size() != energies_.size())
            throw ValidationError("channels: one label per energy required");
    }

    std::size_t size() const { return energies_.size(); }
    const std::vector<double>& energies() const { return energies_; }
    const std::vector<std::string>& labels() const { return labels_; }

    std::size_t index_of(const std::string& label) const
    {
        const auto it = std::find(labels_.begin(), labels_.end(), label);
        if (it == labels_.end())
            throw UsageError("channels: unknown channel '" + label + "'");
        return std::size_t(it - labels_.begin());
    }

private:
    std::vector<double> energies_;
    std::vector<std::string> labels_;
};

inline double cosine_envelope(double tau) { return std::cos(2.0 * std::numbers::pi * tau); }

/// Separable interaction H_fs(b) g(t). The coupling is evaluated once per impact parameter.
struct Interaction {
    std::function<ComplexMatrix(const ImpactParameter&)> coupling;
    std::function<double(double)> envelope = cosine_envelope;

    static Interaction constant(ComplexMatrix h)
    {
        return {[h = std::move(h)](const ImpactParameter&) { return h; }, cosine_envelope};
    }

    /// Two channels coupled by H12 = 2 pi R (zero diagonal).
    static Interaction two_state(double r)
    {
        ComplexMatrix h = ComplexMatrix::Zero(2, 2);
        h(0, 1) = h(1, 0) = from_ratio_units(r);
        return constant(std::move(h));
    }

    /// Couplings follow the complex beam field normalized at `reference`:
    /// upper triangle scales with E(b)/|E(ref)|, lower triangle with its
    /// conjugate, diagonal with |E(b)|/|E(ref)|.
    static Interaction from_beam(BeamProfile profile, ComplexMatrix at_reference,
                                 ImpactParameter reference)
    {
        const double ref = std::abs(profile.field_amplitude(reference));
        if (!(ref > 0.0))
            throw ValidationError("interaction: beam field vanishes at the reference point");
        return {[profile = std::move(profile), h = std::move(at_reference), ref](
                    const ImpactParameter& b) {
                    const std::complex<double> e = profile.field_amplitude(b) / ref;
                    ComplexMatrix out = h;
                    for (Eigen::Index f = 0; f < h.rows(); ++f)
                        for (Eigen::Index s = 0; s < h.cols(); ++s)
                            out(f, s) *= f < s ? e : (f > s ? std::conj(e) : std::abs(e));
                    return out;
                },
                cosine_envelope};
    }
};

struct AmplitudeVector {
    ComplexVector amplitudes;
    double time = 0.0; ///< t / T

    static AmplitudeVector basis_state(std::size_t channels, std::size_t index, double time = 0.0)
    {
        ComplexVector a = ComplexVector::Zero(Eigen::Index(channels));
        a(Eigen::Index(index)) = 1.0;
        return {std::move(a), time};
    }

    double norm() const { return amplitudes.squaredNorm(); }
    double probability(std::size_t channel) const
    {
        return std::norm(amplitudes(Eigen::Index(channel)));
    }
};

using Trajectory = std::vector<AmplitudeVector>;

struct EvolveOptions {
    double tolerance = 1e-10;
    std::size_t samples_per_period = 1000;
    /// Fixed number of output intervals; overrides samples_per_period when nonzero.
    std::size_t samples = 0;
};

struct TimeSpan {
    double start = 0.0;
    double end = 1.0;
};

namespace detail {

// Dormand-Prince 5(4) tableau.
struct DormandPrince {
    static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                            a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                            a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                            b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    // b - b*, the embedded 4th-order weights subtracted from the 5th-order ones.
    static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                            e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
};

class AmplitudeRhs {
public:
    AmplitudeRhs(const std::vector<double>& energies, ComplexMatrix coupling,
                 std::function<double(double)> envelope)
        : energies_(Eigen::Map<const Eigen::VectorXd>(energies.data(), Eigen::Index(energies.size()))),
          coupling_(std::move(coupling)), envelope_(std::move(envelope)),
          phases_(energies_.size()), work_(energies_.size())
    {
    }

    // da/dt = -i g(t) D(t) H D(t)^* a, D = diag(exp(i E t)).
    void operator()(double t, const ComplexVector& a, ComplexVector& out)
    {
        for (Eigen::Index i = 0; i < energies_.size(); ++i)
            phases_(i) = std::polar(1.0, energies_(i) * t);
        work_ = phases_.conjugate().cwiseProduct(a);
        out.noalias() = coupling_ * work_;
        out = out.cwiseProduct(phases_) * std::complex<double>(0.0, -envelope_(t));
    }

private:
    Eigen::VectorXd energies_;
    ComplexMatrix coupling_;
    std::function<double(double)> envelope_;
    ComplexVector phases_;
    ComplexVector work_;
};

inline void validate_hermitian(const ComplexMatrix& h, std::size_t channels)
{
    if (h.rows() != Eigen::Index(channels) || h.cols() != Eigen::Index(channels))
        throw ValidationError("evolve: coupling matrix is " + std::to_string(h.rows()) + "x" +
                              std::to_string(h.cols()) + ", expected " +
                              std::to_string(channels) + "x" + std::to_string(channels));
    if (!h.allFinite())
        throw ValidationError("evolve: coupling matrix has non-finite entries");
    const double scale = 1.0 + h.cwiseAbs().maxCoeff();
    if ((h - h.adjoint()).cwiseAbs().maxCoeff() > 1e-12 * scale)
        throw ValidationError("evolve: coupling matrix is not Hermitian");
}

} // namespace detail

/// Adaptive Dormand-Prince integration from span.start to span.end (either
/// direction). The trajectory holds equally spaced samples including both
/// endpoints; internal steps are clipped so every sample is hit exactly.
inline Trajectory evolve(const ChannelBasis& basis, const Interaction& interaction,
                         const ImpactParameter& b, TimeSpan span, const AmplitudeVector& initial,
                         const EvolveOptions& options = {})
{
    using DP = detail::DormandPrince;
    const std::size_t n = basis.size();
    if (initial.amplitudes.size() != Eigen::Index(n))
        throw ValidationError("evolve: initial state has " +
                              std::to_string(initial.amplitudes.size()) + " amplitudes for " +
                              std::to_string(n) + " channels");
    if (std::abs(initial.norm() - 1.0) > 1e-8)
        throw ValidationError("evolve: initial state is not normalized");
    if (!(options.tolerance > 0.0) || options.tolerance > 1e-4)
        throw ValidationError("evolve: tolerance must lie in (0, 1e-4]");
    if (!std::isfinite(span.start) || !std::isfinite(span.end))
        throw ValidationError("evolve: time span must be finite");
    if (!interaction.coupling || !interaction.envelope)
        throw ValidationError("evolve: interaction is incomplete");

    ComplexMatrix h = interaction.coupling(b);
    detail::validate_hermitian(h, n);

    const double length = span.end - span.start;
    std::size_t intervals = options.samples;
    if (intervals == 0)
        intervals = std::max<std::size_t>(
            1, std::size_t(std::llround(std::abs(length) * double(options.samples_per_period))));

    Trajectory out;
    out.reserve(intervals + 1);
    out.push_back({initial.amplitudes, span.start});
    if (length == 0.0)
        return out;

    const double tol = options.tolerance;
    const double direction = length > 0 ? 1.0 : -1.0;
    const double h_norm = h.cwiseAbs().rowwise().sum().maxCoeff();
    detail::AmplitudeRhs rhs(basis.energies(), std::move(h), interaction.envelope);

    ComplexVector y = initial.amplitudes;
    ComplexVector k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), tmp(n), y5(n);
    double t = span.start;
    double step = direction * std::min(std::abs(length) / double(intervals),
                                      0.05 / (1.0 + h_norm));
    rhs(t, y, k1);

    for (std::size_t j = 1; j <= intervals; ++j) {
        const double target = j == intervals
                                  ? span.end
                                  : span.start + length * (double(j) / double(intervals));
        while (direction * (target - t) > 0.0) {
            const double floor = 1e-14 * std::max(1.0, std::abs(t));
            if (std::abs(step) < floor)
                throw IntegrationError("evolve: step size underflow", t);
            if (std::abs(target - t) < floor) {
                t = target;
                break;
            }
            bool clipped = false;
            double h_try = step;
            if (direction * (t + h_try - target) >= 0.0) {
                h_try = target - t;
                clipped = true;
            }

            tmp = y + h_try * DP::a21 * k1;
            rhs(t + DP::c2 * h_try, tmp, k2);
            tmp = y + h_try * (DP::a31 * k1 + DP::a32 * k2);
            rhs(t + DP::c3 * h_try, tmp, k3);
            tmp = y + h_try * (DP::a41 * k1 + DP::a42 * k2 + DP::a43 * k3);
            rhs(t + DP::c4 * h_try, tmp, k4);
            tmp = y + h_try * (DP::a51 * k1 + DP::a52 * k2 + DP::a53 * k3 + DP::a54 * k4);
            rhs(t + DP::c5 * h_try, tmp, k5);
            tmp = y + h_try *
                          (DP::a61 * k1 + DP::a62 * k2 + DP::a63 * k3 + DP::a64 * k4 + DP::a65 * k5);
            rhs(t + h_try, tmp, k6);
            y5 = y + h_try *
                         (DP::b1 * k1 + DP::b3 * k3 + DP::b4 * k4 + DP::b5 * k5 + DP::b6 * k6);
            const double t_new = clipped ? target : t + h_try;
            rhs(t_new, y5, k7);

            double err = 0.0;
            for (Eigen::Index i = 0; i < Eigen::Index(n); ++i) {
                const std::complex<double> e =
                    h_try * (DP::e1 * k1(i) + DP::e3 * k3(i) + DP::e4 * k4(i) +
                             DP::e5 * k5(i) + DP::e6 * k6(i) + DP::e7 * k7(i));
                const double scale = tol * (1.0 + std::max(std::abs(y(i)), std::abs(y5(i))));
                err = std::max(err, std::abs(e) / scale);
            }
            if (!std::isfinite(err))
                throw IntegrationError("evolve: non-finite amplitudes", t);

            const double factor =
                err == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
            if (err <= 1.0) {
                t = t_new;
                y = y5;
                k1 = k7; // first-same-as-last
                // A clipped step says nothing about how large the next one may be.
                if (!clipped || factor < 1.0)
                    step = h_try * factor;
            } else {
                step = h_try * factor;
            }
        }
        out.push_back({y, target});
    }
    return out;
}

inline double final_probability(const Trajectory& trajectory, std::size_t channel)
{
    if (trajectory.empty())
        throw UsageError("final_probability: empty trajectory");
    const auto& last = trajectory.back();
    if (channel >= std::size_t(last.amplitudes.size()))
        throw UsageError("final_probability: channel index out of range");
    return last.probability(channel);
}

inline double final_probability(const Trajectory& trajectory, const ChannelBasis& basis,
                                 const std::string& label)
{
    return final_probability(trajectory, basis.index_of(label));
}

/// Final amplitude a_f(b, t_final) for the system started in `initial_channel`
/// at t = 0, evaluated independently for every impact parameter in parallel.
inline std::vector<std::complex<double>>
final_amplitudes(const ChannelBasis& basis, const Interaction& interaction,
                 const std::vector<ImpactParameter>& b_points, double t_final, std::size_t channel,
                 std::size_t initial_channel = 0, const EvolveOptions& options = {})
{
    if (channel >= basis.size() || initial_channel >= basis.size())
        throw UsageError("probability_map: channel index out of range");
    std::vector<std::complex<double>> out(b_points.size());
    const auto initial = AmplitudeVector::basis_state(basis.size(), initial_channel);

    std::size_t workers = std::max(1u, std::thread::hardware_concurrency());
    workers = std::min(workers, std::max<std::size_t>(1, b_points.size()));
    std::vector<std::exception_ptr> failures(workers);
    std::vector<std::size_t> failed_at(workers, b_points.size());

    auto run = [&](std::size_t worker) {
        for (std::size_t i = worker; i < b_points.size(); i += workers) {
            try {
                // Only the endpoint is needed; one output interval keeps steps adaptive.
                EvolveOptions opts = options;
                opts.samples = 1;
                const auto traj = evolve(basis, interaction, b_points[i], {0.0, t_final}, initial, opts);
                out[i] = traj.back().amplitudes(Eigen::Index(channel));
            } catch (...) {
                failures[worker] = std::current_exception();
                failed_at[worker] = i;
                return;
            }
        }
    };
    {
        std::vector<std::jthread> pool;
        for (std::size_t w = 1; w < workers; ++w)
            pool.emplace_back(std::function<void()>([&run, w] { run(w); }));
        run(0);
    }

    // Report the lowest failing index so the error is independent of scheduling.
    std::size_t first = b_points.size();
    std::exception_ptr failure;
    for (std::size_t w = 0; w < workers; ++w)
        if (failures[w] && failed_at[w] < first) {
            first = failed_at[w];
            failure = failures[w];
        }
    if (failure) {
        const auto& b = b_points[first];
        const std::string where =
            "at b = (" + std::to_string(b.bx) + ", " + std::to_string(b.by) + "): ";
        try {
            std::rethrow_exception(failure);
        } catch (const IntegrationError& e) {
            throw IntegrationError(where + e.what(), e.time());
        } catch (const ValidationError& e) {
            throw ValidationError(where + e.what());
        }
    }
    return out;
}

inline std::vector<double> probability_map(const ChannelBasis& basis, const Interaction& interaction,
                                           const std::vector<ImpactParameter>& b_points,
                                           double t_final, std::size_t channel,
                                           std::size_t initial_channel = 0,
                                           const EvolveOptions& options = {})
{
    const auto amps =
        final_amplitudes(basis, interaction, b_points, t_final, channel, initial_channel, options);
    std::vector<double> out(amps.size());
    std::transform(amps.begin(), amps.end(), out.begin(),
                   [](std::complex<double> a) { return std::norm(a); });
    return out;
}

/// Grid form: samples are the final amplitudes a_f(b), so |samples|^2 is P(b)
/// and the field can go straight into cross_section_b.
inline AmplitudeField probability_map(const ChannelBasis& basis, const Interaction& interaction,
                                      const TransverseGrid& grid, double wave_number,
                                      double t_final, std::size_t channel,
                                      std::size_t initial_channel = 0,
                                      const EvolveOptions& options = {})
{
    const std::size_t n = grid.size();
    std::vector<ImpactParameter> points;
    points.reserve(n * n);
    for (std::size_t iy = 0; iy < n; ++iy)
        for (std::size_t ix = 0; ix < n; ++ix)
            points.push_back({grid.coordinate(ix), grid.coordinate(iy)});
    return AmplitudeField(grid, Space::B, wave_number,
                          final_amplitudes(basis, interaction, points, t_final, channel,
                                           initial_channel, options));
}

} // namespace bspace
