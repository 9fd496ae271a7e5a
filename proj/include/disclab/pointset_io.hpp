#pragma once

// Point-set file format: UTF-8 text, one "x,y" pair per line with 17
// significant digits, '#' lines are comments. Shared by the library and the
// CLI so exported sets round-trip.

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "disclab/pointsets.hpp"

namespace disclab {

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline void write_pointset(std::ostream& os, const PointSet& ps) {
    os << "# disclab point set\n";
    os << "# label: " << ps.label << "\n";
    os << "# n: " << ps.points.size() << "\n";
    char buf[80];
    for (const Vec2& p : ps.points) {
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g\n", p.x, p.y);
        os << buf;
    }
}

inline void write_pointset_file(const std::string& path, const PointSet& ps) {
    std::ofstream os(path);
    if (!os) throw IoError("cannot open for writing: " + path);
    write_pointset(os, ps);
}

inline PointSet read_pointset_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw IoError("cannot open point-set file: " + path);
    PointSet ps;
    ps.label = path;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty()) continue;
        if (line[0] == '#') {
            const std::string tag = "# label: ";
            if (line.rfind(tag, 0) == 0) ps.label = line.substr(tag.size());
            continue;
        }
        const auto comma = line.find(',');
        if (comma == std::string::npos)
            throw IoError(path + ":" + std::to_string(lineno) + ": expected \"x,y\"");
        std::size_t usedx = 0, usedy = 0;
        double x, y;
        try {
            x = std::stod(line.substr(0, comma), &usedx);
            y = std::stod(line.substr(comma + 1), &usedy);
        } catch (const std::exception&) {
            throw IoError(path + ":" + std::to_string(lineno) + ": malformed number");
        }
        if (!(x >= 0.0 && x < 1.0 && y >= 0.0 && y < 1.0))
            throw IoError(path + ":" + std::to_string(lineno) +
                          ": point outside [0,1)^2");
        ps.points.push_back({x, y});
    }
    if (ps.points.empty()) throw IoError(path + ": no points");
    return ps;
}

}  // namespace disclab
