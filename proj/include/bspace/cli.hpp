#pragma once

// Command-line front end. `run` is the whole program; tools/bspace.cpp only
// forwards argv so the test suites can drive subcommands in-process.
//
// Exit codes: 0 success, 1 validation or usage error, 2 numerical failure, 3 I/O error.

#include <bspace/beam.hpp>
#include <bspace/channels.hpp>
#include <bspace/config.hpp>
#include <bspace/duality.hpp>
#include <bspace/errors.hpp>
#include <bspace/field_io.hpp>
#include <bspace/figures.hpp>
#include <bspace/manybody.hpp>
#include <bspace/twostate.hpp>

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <functional>
#include <istream>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace bspace::cli {

enum ExitCode : int { ok = 0, validation = 1, numerical = 2, io = 3 };

/// Appends `deviation,ratio` to every (b, P_joint, P_1, ..., P_N) row.
/// Comment lines pass through; a leading column-name row gets the two names.
inline void correlate_table(std::istream& in, std::ostream& out, const std::string& source = "input")
{
    std::string line;
    std::size_t line_no = 0;
    bool first_data = true;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty() || line[0] == '#') {
            out << line << '\n';
            continue;
        }
        std::vector<std::string> cells;
        {
            std::istringstream row(line);
            std::string cell;
            while (std::getline(row, cell, ','))
                cells.push_back(cell);
        }
        std::vector<double> values;
        bool numeric = true;
        for (const auto& c : cells) {
            try {
                std::size_t used = 0;
                values.push_back(std::stod(c, &used));
                if (c.find_first_not_of(" \t", used) != std::string::npos)
                    numeric = false;
            } catch (const std::exception&) {
                numeric = false;
            }
        }
        if (!numeric) {
            if (!first_data)
                throw ValidationError(source + ":" + std::to_string(line_no) + ": non-numeric row");
            out << line << ",deviation,ratio\n";
            first_data = false;
            continue;
        }
        first_data = false;
        if (values.size() < 3)
            throw ValidationError(source + ":" + std::to_string(line_no) +
                                  ": need b, P_joint and at least one P_j");
        const std::vector<double> singles(values.begin() + 2, values.end());
        CorrelationRecord rec;
        try {
            rec = correlation_index(values[1], singles);
        } catch (const ValidationError& e) {
            throw ValidationError(source + ":" + std::to_string(line_no) + ": " + e.what());
        }
        out << line << ',' << format_number(rec.deviation) << ','
            << (rec.ratio ? format_number(*rec.ratio) : std::string()) << '\n';
    }
}

namespace detail {

struct Options {
    std::optional<std::string> config;
    std::optional<std::string> out;
    std::optional<std::string> in;
    std::vector<std::string> overrides;
};

inline void with_output(const Options& opts, const RunConfig& cfg, std::ostream& fallback,
                        const std::function<void(std::ostream&)>& body)
{
    std::optional<std::string> path = opts.out;
    if (!path && cfg.has("output.path"))
        path = cfg.get_string("output.path", "");
    if (!path || *path == "-") {
        body(fallback);
        return;
    }
    std::ostringstream buffer;
    body(buffer);
    std::ofstream file(*path, std::ios::binary);
    if (!file)
        throw IoError("cannot open '" + *path + "' for writing");
    file << buffer.str();
    file.flush();
    if (!file)
        throw IoError("write to '" + *path + "' failed");
}

inline AmplitudeField input_field(const Options& opts, const RunConfig& cfg)
{
    if (opts.in) {
        std::ifstream file(*opts.in);
        if (!file)
            throw IoError("cannot open '" + *opts.in + "'");
        return read_field(file, *opts.in);
    }
    // No table given: the analytic Gaussian f(q) = exp(-q^2 sigma^2 / 2).
    const long n = cfg.get_int("grid.n", 256);
    if (n <= 0)
        throw ValidationError("config: grid.n must be positive");
    const TransverseGrid grid(std::size_t(n), cfg.get_double("grid.extent", 16.0));
    const double sigma = cfg.get_double("grid.sigma", 1.0);
    if (!(sigma > 0.0))
        throw ValidationError("config: grid.sigma must be positive");
    return AmplitudeField::sample(grid, Space::Q, cfg.get_double("grid.k", 1.0),
                                  [sigma](double x, double y) {
                                      return std::complex<double>(
                                          std::exp(-(x * x + y * y) * sigma * sigma / 2.0), 0.0);
                                  });
}

inline void field_diagnostics(const AmplitudeField& field, std::ostream& err)
{
    if (wraparound_warning(field))
        err << "warning: " << to_string(field.space())
            << "-space field exceeds 1e-12 of its peak at the grid boundary (ratio "
            << format_number(boundary_ratio(field)) << "); wrap-around may bias results\n";
    if (field.space() == Space::B)
        if (const auto bad = unitarity_violations(field))
            err << "warning: " << bad << " b-space samples have |a(b)| > 1\n";
}

inline EvolveOptions evolve_options(const RunConfig& cfg)
{
    EvolveOptions o;
    o.tolerance = cfg.get_double("channels.tolerance", 1e-10);
    o.samples_per_period = cfg.sample_count("channels.samples_per_period", 1000);
    return o;
}

} // namespace detail

inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Impact-parameter transition amplitudes: beams, coupled channels, Fourier duality"};
    app.require_subcommand(1);
    detail::Options opts;

    auto add_common = [&](CLI::App* sub, bool takes_input) {
        sub->add_option("--config", opts.config, "INI-style configuration file");
        sub->add_option("--out", opts.out, "Output path (default stdout)");
        sub->add_option("--set", opts.overrides, "Override: section.key=value (repeatable)")
            ->allow_extra_args(false);
        if (takes_input)
            sub->add_option("--in", opts.in, "Input table");
        return sub;
    };

    std::function<void(const RunConfig&)> action;
    auto emit = [&](const RunConfig& cfg, const Dataset& d) {
        detail::with_output(opts, cfg, out, [&](std::ostream& o) { write_csv(o, d); });
    };

    add_common(app.add_subcommand("beam-profile", "Radial beam cut: b, theta_V, intensity ratio, phase"),
               false)
        ->callback([&] {
            action = [&](const RunConfig& cfg) {
                emit(cfg, beam_profile_dataset(cfg.beam(), cfg.get_double("beam.b_max", 2.0),
                                               cfg.sample_count("beam.samples", 200),
                                               cfg.get_double("beam.azimuth", 0.0)));
            };
        });

    add_common(app.add_subcommand("evolve", "Integrate the coupled-channel amplitude equations"), false)
        ->callback([&] {
            action = [&](const RunConfig& cfg) {
                const ChannelBasis basis = cfg.channel_basis();
                const auto interaction = Interaction::constant(cfg.coupling_matrix(basis.size()));
                const long initial = cfg.get_int("channels.initial", 1);
                if (initial < 1 || std::size_t(initial) > basis.size())
                    throw ValidationError("config: channels.initial out of range");
                const TimeSpan span{cfg.get_double("channels.t_start", 0.0),
                                    cfg.get_double("channels.t_end", 1.0)};
                emit(cfg, evolve_dataset(basis, interaction, span,
                                         AmplitudeVector::basis_state(basis.size(),
                                                                      std::size_t(initial - 1),
                                                                      span.start),
                                         detail::evolve_options(cfg)));
            };
        });

    add_common(app.add_subcommand("fig2", "P(tau) for R = 2.718: closed form and integrated"), false)
        ->callback([&] {
            action = [&](const RunConfig& cfg) {
                emit(cfg, fig2_dataset(cfg.drive(2.718).coupling_strength,
                                       cfg.sample_count("drive.samples", 1000),
                                       detail::evolve_options(cfg)));
            };
        });

    add_common(app.add_subcommand("fig3", "P(tau) for R = 1/2, pi/2, pi"), false)->callback([&] {
        action = [&](const RunConfig& cfg) {
            emit(cfg, fig3_dataset(cfg.sample_count("drive.samples", 1000)));
        };
    });

    add_common(app.add_subcommand("fig4", "Transfer probability across a Gaussian beam at t = T/4"), false)
        ->callback([&] {
            action = [&](const RunConfig& cfg) {
                emit(cfg, fig4_dataset(cfg.beam(),
                                       cfg.drive(1.5 * std::numbers::pi).coupling_strength,
                                       cfg.sample_count("drive.samples", 999),
                                       cfg.get_double("drive.tau", 0.25)));
            };
        });

    add_common(app.add_subcommand("fig5", "Gaussian intensity ratio against vortex-angle ratio"), false)
        ->callback([&] {
            action = [&](const RunConfig& cfg) {
                emit(cfg, fig5_dataset(cfg.beam(), cfg.sample_count("beam.samples", 100)));
            };
        });

    add_common(app.add_subcommand("transform", "Map an amplitude table between q and b space"), true)
        ->callback([&] {
            action = [&](const RunConfig& cfg) {
                const AmplitudeField input = detail::input_field(opts, cfg);
                detail::field_diagnostics(input, err);
                const AmplitudeField result =
                    input.space() == Space::Q ? q_to_b(input) : b_to_q(input);
                detail::field_diagnostics(result, err);
                detail::with_output(opts, cfg, out, [&](std::ostream& o) { write_field(o, result); });
            };
        });

    add_common(app.add_subcommand("cross-section", "Cross section in both representations"), true)
        ->callback([&] {
            action = [&](const RunConfig& cfg) {
                const AmplitudeField input = detail::input_field(opts, cfg);
                detail::field_diagnostics(input, err);
                const AmplitudeField partner =
                    input.space() == Space::Q ? q_to_b(input) : b_to_q(input);
                const AmplitudeField& a = input.space() == Space::B ? input : partner;
                const AmplitudeField& f = input.space() == Space::Q ? input : partner;
                const double sb = cross_section_b(a);
                const double sq = cross_section_q(f);
                const double rel = sq > 0.0 ? std::abs(sb - sq) / sq : std::abs(sb - sq);
                detail::with_output(opts, cfg, out, [&](std::ostream& o) {
                    o << "sigma_b=" << format_number(sb) << '\n'
                      << "sigma_q=" << format_number(sq) << '\n'
                      << "rel_diff=" << format_number(rel) << '\n';
                });
            };
        });

    add_common(app.add_subcommand("correlate", "Append product-deviation and ratio columns"), true)
        ->callback([&] {
            action = [&](const RunConfig& cfg) {
                if (!opts.in)
                    throw UsageError("correlate: --in <table> is required");
                std::ifstream file(*opts.in);
                if (!file)
                    throw IoError("cannot open '" + *opts.in + "'");
                std::ostringstream buffer;
                correlate_table(file, buffer, *opts.in);
                detail::with_output(opts, cfg, out, [&](std::ostream& o) { o << buffer.str(); });
            };
        });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? ok : validation;
    }

    try {
        const RunConfig cfg = RunConfig::load(opts.config, opts.overrides);
        action(cfg);
    } catch (const IoError& e) {
        err << "error: " << e.what() << '\n';
        return io;
    } catch (const IntegrationError& e) {
        err << "error: " << e.what() << '\n';
        return numerical;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return validation;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return validation;
    }
    return ok;
}

} // namespace bspace::cli
