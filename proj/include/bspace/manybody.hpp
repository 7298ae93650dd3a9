#pragma once

// Independent-electron composition and the product-deviation measure of
// dynamic correlation.

#include <bspace/errors.hpp>

#include <cmath>
#include <complex>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace bspace {

struct SingleElectronChannel {
    std::complex<double> amplitude;
    std::size_t electron = 1;
};

/// Product of the single-electron amplitudes.
inline std::complex<double> product_amplitude(const std::vector<SingleElectronChannel>& channels)
{
    if (channels.empty())
        throw UsageError("product_amplitude: no electrons given");
    std::complex<double> out{1.0, 0.0};
    for (const auto& c : channels) {
        if (!(std::abs(c.amplitude) <= 1.0))
            throw ValidationError("product_amplitude: |a_" + std::to_string(c.electron) +
                                  "| exceeds 1");
        out *= c.amplitude;
    }
    return out;
}

struct CorrelationRecord {
    double joint_probability = 0.0;
    std::vector<double> single_probabilities;
    double deviation = 0.0;       ///< P_joint - prod P_j
    std::optional<double> ratio;  ///< P_joint / prod P_j, absent when the product is 0

    bool independent(double tolerance = 0.0) const { return std::abs(deviation) <= tolerance; }
};

inline CorrelationRecord correlation_index(double joint, const std::vector<double>& singles)
{
    auto check = [](double p, const std::string& what) {
        if (!(p >= 0.0 && p <= 1.0))
            throw ValidationError("correlation_index: " + what + " = " + std::to_string(p) +
                                  " is outside [0, 1]");
    };
    check(joint, "joint probability");
    if (singles.empty())
        throw UsageError("correlation_index: no single-electron probabilities given");
    double product = 1.0;
    for (std::size_t j = 0; j < singles.size(); ++j) {
        check(singles[j], "P_" + std::to_string(j + 1));
        product *= singles[j];
    }
    CorrelationRecord rec;
    rec.joint_probability = joint;
    rec.single_probabilities = singles;
    rec.deviation = joint - product;
    if (product > 0.0)
        rec.ratio = joint / product;
    return rec;
}

/// Convenience: correlation of a joint state built by product_amplitude.
inline CorrelationRecord product_correlation(const std::vector<SingleElectronChannel>& channels)
{
    const double joint = std::norm(product_amplitude(channels));
    std::vector<double> singles;
    singles.reserve(channels.size());
    for (const auto& c : channels)
        singles.push_back(std::norm(c.amplitude));
    return correlation_index(joint, singles);
}

} // namespace bspace
