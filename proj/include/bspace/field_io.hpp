#pragma once

// Columnar amplitude tables:
//
//   # space=b|q
//   # k=<wave number>
//   # n=<points per axis>
//   # extent=<half width>
//   bx,by,re,im            (qx,qy,re,im for q space)
//   ...n*n rows...

#include <bspace/errors.hpp>
#include <bspace/field.hpp>
#include <bspace/figures.hpp>

#include <cmath>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace bspace {

inline void write_field(std::ostream& out, const AmplitudeField& field)
{
    const std::string s = to_string(field.space());
    out << "# space=" << s << '\n'
        << "# k=" << format_number(field.wave_number()) << '\n'
        << "# n=" << field.size() << '\n'
        << "# extent=" << format_number(field.grid().extent()) << '\n'
        << s << "x," << s << "y,re,im\n";
    const auto& g = field.grid();
    for (std::size_t iy = 0; iy < g.size(); ++iy)
        for (std::size_t ix = 0; ix < g.size(); ++ix) {
            const auto v = field.at(ix, iy);
            out << format_number(g.coordinate(ix)) << ',' << format_number(g.coordinate(iy)) << ','
                << format_number(v.real()) << ',' << format_number(v.imag()) << '\n';
        }
}

inline AmplitudeField read_field(std::istream& in, const std::string& source = "input")
{
    std::map<std::string, std::string> header;
    std::string line;
    std::size_t line_no = 0;
    auto fail = [&](const std::string& why) {
        throw ValidationError(source + ":" + std::to_string(line_no) + ": " + why);
    };
    std::optional<AmplitudeField> field;
    std::vector<bool> seen;
    std::size_t filled = 0;
    bool columns_seen = false;

    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty())
            continue;
        if (line[0] == '#') {
            const auto eq = line.find('=');
            if (eq == std::string::npos)
                continue;
            std::string key = line.substr(1, eq - 1);
            key.erase(0, key.find_first_not_of(' '));
            header[key] = line.substr(eq + 1);
            continue;
        }
        if (!columns_seen) {
            columns_seen = true;
            if (!header.count("space") || !header.count("k") || !header.count("n") ||
                !header.count("extent"))
                fail("missing one of the space/k/n/extent header lines");
            const std::string space = header["space"];
            if (space != "b" && space != "q")
                fail("space must be b or q");
            double k = 0, extent = 0;
            long n = 0;
            try {
                k = std::stod(header["k"]);
                extent = std::stod(header["extent"]);
                n = std::stol(header["n"]);
            } catch (const std::exception&) {
                fail("malformed k/n/extent header");
            }
            if (n <= 0)
                fail("n must be positive");
            field.emplace(TransverseGrid(std::size_t(n), extent), space == "b" ? Space::B : Space::Q,
                          k);
            seen.assign(std::size_t(n) * std::size_t(n), false);
            if (line.find_first_not_of("0123456789+-.eE, ") != std::string::npos)
                continue; // column-name row
        }
        std::istringstream row(line);
        std::string cell;
        std::vector<double> v;
        while (std::getline(row, cell, ',')) {
            try {
                std::size_t used = 0;
                v.push_back(std::stod(cell, &used));
            } catch (const std::exception&) {
                fail("non-numeric cell '" + cell + "'");
            }
        }
        if (v.size() != 4)
            fail("expected 4 columns");
        const auto& g = field->grid();
        const double d = g.spacing();
        const double fx = (v[0] + g.extent()) / d;
        const double fy = (v[1] + g.extent()) / d;
        const long ix = std::lround(fx), iy = std::lround(fy);
        if (ix < 0 || iy < 0 || ix >= long(g.size()) || iy >= long(g.size()) ||
            std::abs(fx - double(ix)) > 1e-6 || std::abs(fy - double(iy)) > 1e-6)
            fail("coordinate off the declared grid");
        const std::size_t idx = std::size_t(iy) * g.size() + std::size_t(ix);
        if (seen[idx])
            fail("duplicate grid point");
        seen[idx] = true;
        ++filled;
        field->at(std::size_t(ix), std::size_t(iy)) = {v[2], v[3]};
    }
    if (!field)
        throw ValidationError(source + ": no amplitude table found");
    if (filled != seen.size())
        throw ValidationError(source + ": expected " + std::to_string(seen.size()) +
                              " grid points, found " + std::to_string(filled));
    return std::move(*field);
}

} // namespace bspace
