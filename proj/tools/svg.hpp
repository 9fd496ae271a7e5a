#pragma once

// Minimal self-contained SVG scatter/line plots on log-log axes; enough for
// decay curves and scaling fits without a plotting dependency.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

namespace disclab_cli {

struct SvgSeries {
    std::string name;
    std::vector<std::pair<double, double>> points;  // positive coordinates
};

struct SvgRefSlope {
    double slope = -3.0;
    double anchor_x = 1.0;
    double anchor_y = 1.0;
};

inline void write_svg_loglog(std::ostream& os, const std::string& title,
                             const std::vector<SvgSeries>& series,
                             const std::vector<SvgRefSlope>& refs = {}) {
    const int W = 720, H = 520;
    const int ml = 70, mr = 20, mt = 40, mb = 50;
    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    for (const auto& s : series)
        for (const auto& [x, y] : s.points) {
            if (!(x > 0.0 && y > 0.0)) continue;
            xmin = std::min(xmin, std::log10(x));
            xmax = std::max(xmax, std::log10(x));
            ymin = std::min(ymin, std::log10(y));
            ymax = std::max(ymax, std::log10(y));
        }
    if (xmin > xmax) {
        xmin = 0.0;
        xmax = 1.0;
    }
    if (ymin > ymax) {
        ymin = 0.0;
        ymax = 1.0;
    }
    if (xmax - xmin < 1e-9) xmax = xmin + 1.0;
    if (ymax - ymin < 1e-9) ymax = ymin + 1.0;

    const auto px = [&](double lx) {
        return ml + (lx - xmin) / (xmax - xmin) * (W - ml - mr);
    };
    const auto py = [&](double ly) {
        return H - mb - (ly - ymin) / (ymax - ymin) * (H - mt - mb);
    };

    char buf[256];
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
       << "\" viewBox=\"0 0 " << W << " " << H << "\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<text x=\"" << W / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">"
       << title << "</text>\n";

    // decade grid and tick labels
    for (int d = static_cast<int>(std::ceil(xmin)); d <= static_cast<int>(std::floor(xmax)); ++d) {
        std::snprintf(buf, sizeof(buf),
                      "<line x1=\"%.1f\" y1=\"%d\" x2=\"%.1f\" y2=\"%d\" stroke=\"#ddd\"/>"
                      "<text x=\"%.1f\" y=\"%d\" text-anchor=\"middle\" font-size=\"11\">1e%d</text>\n",
                      px(d), mt, px(d), H - mb, px(d), H - mb + 16, d);
        os << buf;
    }
    for (int d = static_cast<int>(std::ceil(ymin)); d <= static_cast<int>(std::floor(ymax)); ++d) {
        std::snprintf(buf, sizeof(buf),
                      "<line x1=\"%d\" y1=\"%.1f\" x2=\"%d\" y2=\"%.1f\" stroke=\"#ddd\"/>"
                      "<text x=\"%d\" y=\"%.1f\" text-anchor=\"end\" font-size=\"11\">1e%d</text>\n",
                      ml, py(d), W - mr, py(d), ml - 6, py(d) + 4, d);
        os << buf;
    }
    os << "<rect x=\"" << ml << "\" y=\"" << mt << "\" width=\"" << (W - ml - mr)
       << "\" height=\"" << (H - mt - mb) << "\" fill=\"none\" stroke=\"black\"/>\n";

    for (const auto& ref : refs) {
        const double ly0 = std::log10(ref.anchor_y) + ref.slope * (xmin - std::log10(ref.anchor_x));
        const double ly1 = std::log10(ref.anchor_y) + ref.slope * (xmax - std::log10(ref.anchor_x));
        std::snprintf(buf, sizeof(buf),
                      "<line x1=\"%.1f\" y1=\"%.1f\" x2=\"%.1f\" y2=\"%.1f\" "
                      "stroke=\"#999\" stroke-dasharray=\"6 4\"/>\n",
                      px(xmin), py(ly0), px(xmax), py(ly1));
        os << buf;
        std::snprintf(buf, sizeof(buf),
                      "<text x=\"%.1f\" y=\"%.1f\" font-size=\"11\" fill=\"#666\">slope %g</text>\n",
                      px(xmin) + 6.0, py(ly0) - 6.0, ref.slope);
        os << buf;
    }

    static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                    "#ff7f0e", "#8c564b", "#17becf"};
    int ci = 0;
    for (const auto& s : series) {
        const char* color = palette[ci % 7];
        std::string path;
        bool first = true;
        for (const auto& [x, y] : s.points) {
            if (!(x > 0.0 && y > 0.0)) continue;
            std::snprintf(buf, sizeof(buf), "%c%.2f %.2f ", first ? 'M' : 'L',
                          px(std::log10(x)), py(std::log10(y)));
            path += buf;
            first = false;
        }
        os << "<path d=\"" << path << "\" fill=\"none\" stroke=\"" << color
           << "\" stroke-width=\"1.5\"/>\n";
        for (const auto& [x, y] : s.points) {
            if (!(x > 0.0 && y > 0.0)) continue;
            std::snprintf(buf, sizeof(buf), "<circle cx=\"%.2f\" cy=\"%.2f\" r=\"2.5\" fill=\"%s\"/>\n",
                          px(std::log10(x)), py(std::log10(y)), color);
            os << buf;
        }
        std::snprintf(buf, sizeof(buf),
                      "<text x=\"%d\" y=\"%d\" font-size=\"12\" fill=\"%s\">%s</text>\n",
                      W - mr - 200, mt + 18 + 16 * ci, color, s.name.c_str());
        os << buf;
        ++ci;
    }
    os << "</svg>\n";
}

}  // namespace disclab_cli
