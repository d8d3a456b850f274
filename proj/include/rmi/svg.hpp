#pragma once

#include <string>
#include <vector>

namespace rmi {

struct SvgSeries {
    std::string label;
    std::string color;        // any SVG color string
    std::vector<double> x;
    std::vector<double> y;    // same length as x
};

// Writes a self-contained line plot (axes, ticks, labels, legend, polylines).
// No external renderer is involved; output is deterministic for fixed input.
void write_line_svg(const std::string& path, const std::string& title,
                    const std::string& x_label, const std::string& y_label,
                    const std::vector<SvgSeries>& series);

}  // namespace rmi
