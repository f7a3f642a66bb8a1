#include "abandon/svg_chart.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace abandon::svg {

namespace {

constexpr double kWidth = 880, kHeight = 560;
constexpr double kLeft = 72, kRight = 24, kTop = 44, kBottom = 58;

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};
constexpr std::size_t kPaletteSize = sizeof(kPalette) / sizeof(kPalette[0]);

struct Bounds {
    double x_lo = std::numeric_limits<double>::infinity();
    double x_hi = -std::numeric_limits<double>::infinity();
    double y_lo = std::numeric_limits<double>::infinity();
    double y_hi = -std::numeric_limits<double>::infinity();

    void add(double x, double y) {
        x_lo = std::min(x_lo, x);
        x_hi = std::max(x_hi, x);
        y_lo = std::min(y_lo, y);
        y_hi = std::max(y_hi, y);
    }

    // Expand degenerate or empty ranges so the mapping stays finite.
    void regularize() {
        if (!(x_lo <= x_hi)) {
            x_lo = 0.0;
            x_hi = 1.0;
        }
        if (!(y_lo <= y_hi)) {
            y_lo = 0.0;
            y_hi = 1.0;
        }
        if (x_hi - x_lo < 1e-12) {
            x_lo -= 0.5;
            x_hi += 0.5;
        }
        if (y_hi - y_lo < 1e-12) {
            y_lo -= 0.5;
            y_hi += 0.5;
        }
    }

    double px(double x) const {
        return kLeft + (x - x_lo) / (x_hi - x_lo) * (kWidth - kLeft - kRight);
    }
    double py(double y) const {
        return kHeight - kBottom - (y - y_lo) / (y_hi - y_lo) * (kHeight - kTop - kBottom);
    }
};

std::string tick_label(double v) {
    std::ostringstream ss;
    ss.precision(4);
    ss << v;
    return ss.str();
}

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            default: out += c;
        }
    }
    return out;
}

void open_frame(std::ostringstream& out, const std::string& title, const std::string& x_label,
                const std::string& y_label, const Bounds& b) {
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
        << kHeight << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" "
        << "font-family=\"sans-serif\" font-size=\"16\">" << escape(title) << "</text>\n";

    const double x0 = kLeft, x1 = kWidth - kRight;
    const double y0 = kHeight - kBottom, y1 = kTop;
    out << "<line x1=\"" << x0 << "\" y1=\"" << y0 << "\" x2=\"" << x1 << "\" y2=\"" << y0
        << "\" stroke=\"#333\"/>\n";
    out << "<line x1=\"" << x0 << "\" y1=\"" << y0 << "\" x2=\"" << x0 << "\" y2=\"" << y1
        << "\" stroke=\"#333\"/>\n";

    constexpr int kTicks = 5;
    for (int t = 0; t <= kTicks; ++t) {
        const double fx = b.x_lo + (b.x_hi - b.x_lo) * t / kTicks;
        const double fy = b.y_lo + (b.y_hi - b.y_lo) * t / kTicks;
        const double px = b.px(fx), py = b.py(fy);
        out << "<line x1=\"" << px << "\" y1=\"" << y0 << "\" x2=\"" << px << "\" y2=\""
            << y0 + 5 << "\" stroke=\"#333\"/>\n";
        out << "<text x=\"" << px << "\" y=\"" << y0 + 20
            << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">"
            << tick_label(fx) << "</text>\n";
        out << "<line x1=\"" << x0 - 5 << "\" y1=\"" << py << "\" x2=\"" << x0 << "\" y2=\""
            << py << "\" stroke=\"#333\"/>\n";
        out << "<text x=\"" << x0 - 8 << "\" y=\"" << py + 4
            << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
            << tick_label(fy) << "</text>\n";
    }

    out << "<text x=\"" << (x0 + x1) / 2 << "\" y=\"" << kHeight - 14
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">"
        << escape(x_label) << "</text>\n";
    out << "<text x=\"18\" y=\"" << (y0 + y1) / 2
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
        << "transform=\"rotate(-90 18 " << (y0 + y1) / 2 << ")\">" << escape(y_label)
        << "</text>\n";
}

void save(const std::string& path, const std::string& body) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open SVG output file: " + path);
    out << body;
    if (!out) throw std::runtime_error("failed while writing SVG file: " + path);
}

}  // namespace

std::vector<std::pair<double, double>> thin_points(
    const std::vector<std::pair<double, double>>& points, std::size_t max_points) {
    if (max_points < 2 || points.size() <= max_points) return points;
    std::vector<std::pair<double, double>> out;
    out.reserve(max_points);
    const double step = static_cast<double>(points.size() - 1) / (max_points - 1);
    for (std::size_t k = 0; k < max_points; ++k) {
        const auto idx = static_cast<std::size_t>(std::llround(k * step));
        out.push_back(points[std::min(idx, points.size() - 1)]);
    }
    return out;
}

void write_line_chart(const std::string& path, const std::string& title,
                      const std::string& x_label, const std::string& y_label,
                      const std::vector<Series>& series) {
    Bounds b;
    for (const auto& s : series)
        for (const auto& [x, y] : s.points) b.add(x, y);
    b.regularize();

    std::ostringstream out;
    open_frame(out, title, x_label, y_label, b);

    std::vector<std::string> labels;  // first-seen order fixes the colors
    auto color_of = [&](const std::string& label) {
        for (std::size_t i = 0; i < labels.size(); ++i)
            if (labels[i] == label) return kPalette[i % kPaletteSize];
        labels.push_back(label);
        return kPalette[(labels.size() - 1) % kPaletteSize];
    };

    for (const auto& s : series) {
        if (s.points.empty()) continue;
        const char* color = color_of(s.label);
        out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.2\" points=\"";
        for (const auto& [x, y] : s.points) out << b.px(x) << ',' << b.py(y) << ' ';
        out << "\"/>\n";
    }

    double ly = kTop + 8;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i].empty()) continue;
        const double lx = kWidth - kRight - 150;
        out << "<line x1=\"" << lx << "\" y1=\"" << ly << "\" x2=\"" << lx + 22 << "\" y2=\""
            << ly << "\" stroke=\"" << kPalette[i % kPaletteSize] << "\" stroke-width=\"2\"/>\n";
        out << "<text x=\"" << lx + 28 << "\" y=\"" << ly + 4
            << "\" font-family=\"sans-serif\" font-size=\"12\">" << escape(labels[i])
            << "</text>\n";
        ly += 18;
    }

    out << "</svg>\n";
    save(path, out.str());
}

void write_segment_chart(const std::string& path, const std::string& title,
                         const std::string& x_label, const std::string& y_label,
                         const std::vector<Segment>& segments) {
    Bounds b;
    for (const auto& s : segments) {
        b.add(s.x1, s.y1);
        b.add(s.x2, s.y2);
    }
    b.regularize();

    std::ostringstream out;
    open_frame(out, title, x_label, y_label, b);
    for (const auto& s : segments) {
        out << "<line x1=\"" << b.px(s.x1) << "\" y1=\"" << b.py(s.y1) << "\" x2=\""
            << b.px(s.x2) << "\" y2=\"" << b.py(s.y2) << "\" stroke=\"" << escape(s.color)
            << "\" stroke-width=\"1.4\"/>\n";
        out << "<circle cx=\"" << b.px(s.x2) << "\" cy=\"" << b.py(s.y2)
            << "\" r=\"2\" fill=\"#333\"/>\n";
    }
    out << "</svg>\n";
    save(path, out.str());
}

}  // namespace abandon::svg
