#pragma once

#include <string>
#include <utility>
#include <vector>

namespace abandon::svg {

struct Series {
    std::string label;  // series with the same label share a color
    std::vector<std::pair<double, double>> points;
};

struct Segment {
    double x1 = 0.0, y1 = 0.0, x2 = 0.0, y2 = 0.0;
    std::string color;  // any SVG color string
};

// Minimal self-contained line chart: axes, ticks, legend, one polyline per
// series. Throws std::runtime_error when the file cannot be written.
void write_line_chart(const std::string& path, const std::string& title,
                      const std::string& x_label, const std::string& y_label,
                      const std::vector<Series>& series);

// Raw colored segments in data coordinates, same frame as the line chart.
void write_segment_chart(const std::string& path, const std::string& title,
                         const std::string& x_label, const std::string& y_label,
                         const std::vector<Segment>& segments);

// Keeps at most max_points of a polyline, always retaining the endpoints.
std::vector<std::pair<double, double>> thin_points(
    const std::vector<std::pair<double, double>>& points, std::size_t max_points);

}  // namespace abandon::svg
