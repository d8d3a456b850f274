#include "rmi/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

#include "rmi/common.hpp"

namespace rmi {

namespace {

struct Range {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();

    void include(double v) {
        if (std::isfinite(v)) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
    }
    void widen() {
        if (lo > hi) { lo = 0.0; hi = 1.0; }           // no finite data
        if (lo == hi) { lo -= 0.5; hi += 0.5; }        // flat series
        double pad = 0.05 * (hi - lo);
        lo -= pad;
        hi += pad;
    }
};

// Largest "nice" step (1, 2, or 5 times a power of ten) giving <= 6 intervals.
double nice_step(double range) {
    double raw = range / 6.0;
    double mag = std::pow(10.0, std::floor(std::log10(raw)));
    for (double m : {1.0, 2.0, 5.0, 10.0})
        if (m * mag >= raw) return m * mag;
    return 10.0 * mag;
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

}  // namespace

void write_line_svg(const std::string& path, const std::string& title,
                    const std::string& x_label, const std::string& y_label,
                    const std::vector<SvgSeries>& series) {
    Range rx, ry;
    for (const auto& s : series) {
        if (s.x.size() != s.y.size())
            throw ConfigError("svg series '" + s.label + "': x/y length mismatch");
        for (double v : s.x) rx.include(v);
        for (double v : s.y) ry.include(v);
    }
    rx.widen();
    ry.widen();

    const double width = 800, height = 500;
    const double ml = 70, mr = 24, mt = 40, mb = 56;  // margins
    const double pw = width - ml - mr, ph = height - mt - mb;
    auto px = [&](double v) { return ml + pw * (v - rx.lo) / (rx.hi - rx.lo); };
    auto py = [&](double v) { return mt + ph * (ry.hi - v) / (ry.hi - ry.lo); };

    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot open for writing: " + path);
    char buf[256];
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"500\" "
           "viewBox=\"0 0 800 500\">\n"
           "<rect width=\"800\" height=\"500\" fill=\"white\"/>\n"
           "<g font-family=\"sans-serif\" font-size=\"13\" fill=\"#333\">\n";
    // title and axis labels
    out << "<text x=\"" << fmt(ml + pw / 2) << "\" y=\"24\" text-anchor=\"middle\" "
           "font-size=\"16\">" << title << "</text>\n";
    out << "<text x=\"" << fmt(ml + pw / 2) << "\" y=\"" << fmt(height - 12)
        << "\" text-anchor=\"middle\">" << x_label << "</text>\n";
    out << "<text x=\"18\" y=\"" << fmt(mt + ph / 2)
        << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 " << fmt(mt + ph / 2)
        << ")\">" << y_label << "</text>\n";

    // gridlines and ticks
    double sx = nice_step(rx.hi - rx.lo);
    double sy = nice_step(ry.hi - ry.lo);
    for (double v = std::ceil(rx.lo / sx) * sx; v <= rx.hi + 1e-9 * sx; v += sx) {
        std::snprintf(buf, sizeof(buf),
                      "<line x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" y2=\"%.2f\" "
                      "stroke=\"#ddd\"/>\n",
                      px(v), mt, px(v), mt + ph);
        out << buf;
        out << "<text x=\"" << fmt(px(v)) << "\" y=\"" << fmt(mt + ph + 18)
            << "\" text-anchor=\"middle\">" << fmt(v) << "</text>\n";
    }
    for (double v = std::ceil(ry.lo / sy) * sy; v <= ry.hi + 1e-9 * sy; v += sy) {
        std::snprintf(buf, sizeof(buf),
                      "<line x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" y2=\"%.2f\" "
                      "stroke=\"#ddd\"/>\n",
                      ml, py(v), ml + pw, py(v));
        out << buf;
        out << "<text x=\"" << fmt(ml - 8) << "\" y=\"" << fmt(py(v) + 4)
            << "\" text-anchor=\"end\">" << fmt(v) << "</text>\n";
    }
    // axes on top of the grid
    std::snprintf(buf, sizeof(buf),
                  "<line x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" y2=\"%.2f\" "
                  "stroke=\"#333\"/>\n",
                  ml, mt + ph, ml + pw, mt + ph);
    out << buf;
    std::snprintf(buf, sizeof(buf),
                  "<line x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" y2=\"%.2f\" "
                  "stroke=\"#333\"/>\n",
                  ml, mt, ml, mt + ph);
    out << buf;

    // data polylines
    for (const auto& s : series) {
        out << "<polyline fill=\"none\" stroke=\"" << s.color
            << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
            std::snprintf(buf, sizeof(buf), "%.2f,%.2f ", px(s.x[i]), py(s.y[i]));
            out << buf;
        }
        out << "\"/>\n";
    }
    // legend, top-right inside the plot area
    double ly = mt + 16;
    for (const auto& s : series) {
        std::snprintf(buf, sizeof(buf),
                      "<line x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" y2=\"%.2f\" "
                      "stroke=\"%s\" stroke-width=\"2\"/>\n",
                      ml + pw - 130, ly - 4, ml + pw - 104, ly - 4, s.color.c_str());
        out << buf;
        out << "<text x=\"" << fmt(ml + pw - 98) << "\" y=\"" << fmt(ly) << "\">"
            << s.label << "</text>\n";
        ly += 18;
    }
    out << "</g>\n</svg>\n";
    if (!out) throw ConfigError("write failed: " + path);
}

}  // namespace rmi
