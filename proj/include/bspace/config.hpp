#pragma once

// INI-style run configuration with `section.key=value` overrides.
//
//   [beam]     kind, wavelength, waist | rayleigh_range, oam, radial, peak_field,
//              b_max (in waists), samples, azimuth
//   [drive]    R | (H12 [eV], T [s]), tau, samples
//   [channels] energies, coupling_<f>_<s> = "re im", tolerance, initial,
//              t_start, t_end, samples_per_period
//   [grid]     n, extent, k, sigma
//   [output]   path
//
// Energies and couplings under [channels] are dimensionless X T / h ratios,
// on the same scale as R.

#include <bspace/beam.hpp>
#include <bspace/channels.hpp>
#include <bspace/errors.hpp>
#include <bspace/twostate.hpp>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace bspace {

class RunConfig {
public:
    RunConfig() = default;

    static RunConfig load(const std::optional<std::string>& path,
                          const std::vector<std::string>& overrides = {})
    {
        RunConfig cfg;
        if (path) {
            if (!std::filesystem::exists(*path))
                throw IoError("config: cannot open '" + *path + "'");
            std::ifstream in(*path);
            if (!in)
                throw IoError("config: cannot open '" + *path + "'");
            try {
                boost::property_tree::read_ini(in, cfg.tree_);
            } catch (const boost::property_tree::ini_parser_error& e) {
                throw ValidationError("config: " + *path + ": " + e.message() + " (line " +
                                      std::to_string(e.line()) + ")");
            }
        }
        for (const auto& o : overrides)
            cfg.apply_override(o);
        cfg.check_keys();
        return cfg;
    }

    static RunConfig from_string(const std::string& text)
    {
        RunConfig cfg;
        std::istringstream in(text);
        try {
            boost::property_tree::read_ini(in, cfg.tree_);
        } catch (const boost::property_tree::ini_parser_error& e) {
            throw ValidationError("config: " + e.message());
        }
        cfg.check_keys();
        return cfg;
    }

    void apply_override(const std::string& assignment)
    {
        const auto eq = assignment.find('=');
        const std::string key = assignment.substr(0, eq);
        if (eq == std::string::npos || key.find('.') == std::string::npos)
            throw ValidationError("config: override '" + assignment +
                                  "' is not of the form section.key=value");
        tree_.put(key, assignment.substr(eq + 1));
        check_keys();
    }

    bool has(const std::string& key) const { return tree_.get_optional<std::string>(key).has_value(); }

    std::string get_string(const std::string& key, const std::string& fallback) const
    {
        return tree_.get<std::string>(key, fallback);
    }

    double get_double(const std::string& key, double fallback) const
    {
        const auto raw = tree_.get_optional<std::string>(key);
        return raw ? parse_double(key, *raw) : fallback;
    }

    long get_int(const std::string& key, long fallback) const
    {
        const auto raw = tree_.get_optional<std::string>(key);
        if (!raw)
            return fallback;
        std::size_t used = 0;
        long v = 0;
        try {
            v = std::stol(*raw, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != trim(*raw).size())
            throw ValidationError("config: " + key + " = '" + *raw + "' is not an integer");
        return v;
    }

    std::size_t sample_count(const std::string& key, long fallback) const
    {
        const long n = get_int(key, fallback);
        if (n < 2)
            throw ValidationError("config: " + key + " must be at least 2");
        return std::size_t(n);
    }

    std::vector<double> get_list(const std::string& key) const
    {
        std::vector<double> out;
        const auto raw = tree_.get_optional<std::string>(key);
        if (!raw)
            return out;
        std::string text = *raw;
        std::replace(text.begin(), text.end(), ',', ' ');
        std::istringstream in(text);
        std::string tok;
        while (in >> tok)
            out.push_back(parse_double(key, tok));
        return out;
    }

    BeamProfile beam() const
    {
        const std::string kind = get_string("beam.kind", "gaussian");
        const double wavelength = get_double("beam.wavelength", 8e-7);
        const bool has_waist = has("beam.waist");
        const bool has_range = has("beam.rayleigh_range");
        if (has_waist && has_range)
            throw ValidationError("config: give exactly one of beam.waist and beam.rayleigh_range");
        const double waist = has_range
                                 ? waist_from_rayleigh(wavelength, get_double("beam.rayleigh_range", 0))
                                 : get_double("beam.waist", 1e-5);
        const double e0 = get_double("beam.peak_field", 1.0);
        const long oam = get_int("beam.oam", 0);
        const long radial = get_int("beam.radial", 0);
        if (radial < 0)
            throw ValidationError("config: beam.radial must be nonnegative");
        if (kind == "gaussian")
            return BeamProfile::gaussian(wavelength, waist, e0);
        if (kind == "plane")
            return BeamProfile::plane_wave(wavelength, waist, e0);
        if (kind == "lg")
            return BeamProfile::laguerre_gauss(wavelength, waist, int(oam), unsigned(radial), e0);
        throw ValidationError("config: beam.kind must be gaussian, plane or lg (got '" + kind + "')");
    }

    /// R from drive.R or from drive.H12 + drive.T, never both.
    DriveParameters drive(double default_ratio) const
    {
        const bool ratio = has("drive.R");
        const bool physical = has("drive.H12") || has("drive.T");
        if (ratio && physical)
            throw ValidationError("config: drive.R and drive.H12/drive.T are mutually exclusive");
        if (physical) {
            if (!has("drive.H12") || !has("drive.T"))
                throw ValidationError("config: drive.H12 and drive.T must be given together");
            return DriveParameters::from_physical(get_double("drive.H12", 0), get_double("drive.T", 0));
        }
        return DriveParameters::from_ratio(get_double("drive.R", default_ratio));
    }

    ChannelBasis channel_basis() const
    {
        std::vector<double> energies = get_list("channels.energies");
        if (energies.empty())
            energies = {0.0, 0.0};
        for (double& e : energies)
            e = from_ratio_units(e);
        return ChannelBasis(std::move(energies));
    }

    /// Coupling matrix in hbar/T units. Entries not given default to the
    /// conjugate of their transpose (or zero); with no entries at all a
    /// two-channel system is coupled by the drive block's R.
    ComplexMatrix coupling_matrix(std::size_t channels) const
    {
        const Eigen::Index n = Eigen::Index(channels);
        ComplexMatrix h = ComplexMatrix::Zero(n, n);
        Eigen::MatrixXi given = Eigen::MatrixXi::Zero(n, n);
        bool any = false;
        if (const auto section = tree_.get_child_optional("channels")) {
            for (const auto& [key, value] : *section) {
                if (key.rfind("coupling_", 0) != 0)
                    continue;
                int f = 0, s = 0;
                char tail = 0;
                if (std::sscanf(key.c_str(), "coupling_%d_%d%c", &f, &s, &tail) != 2 || f < 1 ||
                    s < 1 || f > n || s > n)
                    throw ValidationError("config: bad coupling key '" + key + "'");
                const auto parts = get_list("channels." + key);
                if (parts.empty() || parts.size() > 2)
                    throw ValidationError("config: channels." + key + " must be 're [im]'");
                h(f - 1, s - 1) = {from_ratio_units(parts[0]),
                                   parts.size() == 2 ? from_ratio_units(parts[1]) : 0.0};
                given(f - 1, s - 1) = 1;
                any = true;
            }
        }
        if (!any) {
            if (channels != 2)
                throw ValidationError("config: channels with more than two states need coupling_<f>_<s> entries");
            h(0, 1) = h(1, 0) = from_ratio_units(drive(2.718).coupling_strength);
            return h;
        }
        for (Eigen::Index f = 0; f < n; ++f)
            for (Eigen::Index s = 0; s < n; ++s)
                if (!given(f, s) && given(s, f))
                    h(f, s) = std::conj(h(s, f));
        return h;
    }

    const boost::property_tree::ptree& tree() const { return tree_; }

private:
    static std::string trim(const std::string& s)
    {
        const auto b = s.find_first_not_of(" \t");
        const auto e = s.find_last_not_of(" \t");
        return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    }

    static double parse_double(const std::string& key, const std::string& raw)
    {
        const std::string text = trim(raw);
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(text, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != text.size())
            throw ValidationError("config: " + key + " = '" + raw + "' is not a number");
        return v;
    }

    void check_keys() const
    {
        static const std::set<std::string> known = {
            "beam.kind",          "beam.wavelength",     "beam.waist",      "beam.rayleigh_range",
            "beam.oam",           "beam.radial",         "beam.peak_field", "beam.b_max",
            "beam.samples",       "beam.azimuth",        "drive.R",         "drive.H12",
            "drive.T",            "drive.tau",           "drive.samples",   "channels.energies",
            "channels.tolerance",
            "channels.initial",   "channels.t_start",    "channels.t_end",
            "channels.samples_per_period",               "grid.n",          "grid.extent",
            "grid.k",             "grid.sigma",          "output.path"};
        for (const auto& [section, body] : tree_) {
            if (body.empty() && !body.data().empty())
                throw ValidationError("config: '" + section + "' is not inside a section");
            for (const auto& [key, value] : body) {
                const std::string full = section + "." + key;
                if (known.count(full) == 0 &&
                    !(section == "channels" && key.rfind("coupling_", 0) == 0))
                    throw ValidationError("config: unknown key '" + full + "'");
            }
        }
    }

    boost::property_tree::ptree tree_;
};

} // namespace bspace
