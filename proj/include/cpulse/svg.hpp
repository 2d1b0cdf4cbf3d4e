// Copyright 2026 The cpulse Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Minimal deterministic SVG 1.1 writer for excitation profiles: panels of
// polylines for 1D scans, panels of colour-mapped cells for 2D scans. All
// numbers go through one fixed-precision formatter so output bytes depend
// only on the input.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "cpulse/scan.hpp"

namespace cpulse::svg {

struct Rgb {
    int r, g, b;
};

/// Viridis-like map; luminance rises monotonically over [0, 1].
inline Rgb colormap(double v) {
    static constexpr std::array<std::array<double, 3>, 5> stops{{
        {68, 1, 84},
        {59, 82, 139},
        {33, 145, 140},
        {94, 201, 98},
        {253, 231, 37},
    }};
    v = std::clamp(std::isfinite(v) ? v : 0.0, 0.0, 1.0);
    double pos = v * (stops.size() - 1);
    std::size_t i = std::min<std::size_t>(static_cast<std::size_t>(pos), stops.size() - 2);
    double t = pos - static_cast<double>(i);
    auto mix = [&](int c) { return static_cast<int>(std::lround(stops[i][c] + t * (stops[i + 1][c] - stops[i][c]))); };
    return {mix(0), mix(1), mix(2)};
}

inline double luminance(Rgb c) { return 0.2126 * c.r + 0.7152 * c.g + 0.0722 * c.b; }

struct Curve {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
    bool reference = false;  ///< drawn gray and dotted
};

struct LinePanel {
    std::string title;
    std::vector<Curve> curves;
};

struct Heatmap {
    std::string title;
    std::vector<double> x_axis;  ///< epsilon
    std::vector<double> y_axis;  ///< delta
    std::vector<double> values;  ///< row-major, y outer
};

struct Style {
    std::string title;
    std::string x_label = "epsilon";
    std::string y_label = "transition probability";
    int panel_width = 420;
    int panel_height = 300;
    int columns = 2;
};

namespace detail {

inline std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    std::string s = buf;
    if (s == "-0.00") {
        s = "0.00";
    }
    return s;
}

inline std::string escape(const std::string &s) {
    std::string out;
    for (char c : s) {
        switch (c) {
        case '&':
            out += "&amp;";
            break;
        case '<':
            out += "&lt;";
            break;
        case '>':
            out += "&gt;";
            break;
        case '"':
            out += "&quot;";
            break;
        default:
            out += c;
        }
    }
    return out;
}

inline const char *palette(std::size_t i) {
    static constexpr const char *colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
                                             "#8c564b", "#e377c2", "#17becf", "#bcbd22", "#7f7f7f"};
    return colors[i % (sizeof(colors) / sizeof(colors[0]))];
}

inline std::string hex(Rgb c) {
    char buf[8];
    std::snprintf(buf, sizeof(buf), "#%02x%02x%02x", c.r, c.g, c.b);
    return buf;
}

struct Frame {
    double left, top, width, height;
    double x_min, x_max, y_min, y_max;

    double px(double x) const { return left + (x - x_min) / (x_max - x_min) * width; }
    double py(double y) const { return top + height - (y - y_min) / (y_max - y_min) * height; }
};

constexpr double kMarginLeft = 52, kMarginRight = 16, kMarginTop = 28, kMarginBottom = 40;

inline void header(std::ostringstream &os, int width, int height, const std::string &title) {
    os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
       << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << width << "\" height=\"" << height
       << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n"
       << "<rect x=\"0\" y=\"0\" width=\"" << width << "\" height=\"" << height << "\" fill=\"white\"/>\n";
    if (!title.empty()) {
        os << "<text x=\"" << width / 2 << "\" y=\"18\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           << "font-size=\"14\">" << escape(title) << "</text>\n";
    }
}

struct TickRange {
    double x0, x1, y0, y1;
};

inline void axes(std::ostringstream &os, const Frame &f, const Style &style, const std::string &title,
                 std::optional<TickRange> ticks = std::nullopt) {
    os << "<rect x=\"" << num(f.left) << "\" y=\"" << num(f.top) << "\" width=\"" << num(f.width) << "\" height=\""
       << num(f.height) << "\" fill=\"none\" stroke=\"black\" stroke-width=\"1\"/>\n";
    TickRange t = ticks.value_or(TickRange{f.x_min, f.x_max, f.y_min, f.y_max});
    for (int i = 0; i <= 4; ++i) {
        double x = t.x0 + (t.x1 - t.x0) * i / 4;
        double y = t.y0 + (t.y1 - t.y0) * i / 4;
        os << "<text x=\"" << num(f.px(x)) << "\" y=\"" << num(f.top + f.height + 14)
           << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"10\">" << num(x) << "</text>\n";
        os << "<text x=\"" << num(f.left - 4) << "\" y=\"" << num(f.py(y) + 3)
           << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"10\">" << num(y) << "</text>\n";
    }
    os << "<text x=\"" << num(f.left + f.width / 2) << "\" y=\"" << num(f.top + f.height + 30)
       << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" << escape(style.x_label)
       << "</text>\n";
    os << "<text x=\"" << num(f.left - 38) << "\" y=\"" << num(f.top + f.height / 2)
       << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\" transform=\"rotate(-90 "
       << num(f.left - 38) << ' ' << num(f.top + f.height / 2) << ")\">" << escape(style.y_label) << "</text>\n";
    if (!title.empty()) {
        os << "<text x=\"" << num(f.left + f.width / 2) << "\" y=\"" << num(f.top - 6)
           << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" << escape(title)
           << "</text>\n";
    }
}

inline Frame panel_frame(std::size_t index, const Style &style, double y_offset, double gutter, double x_min,
                         double x_max, double y_min, double y_max) {
    std::size_t col = index % static_cast<std::size_t>(style.columns);
    std::size_t row = index / static_cast<std::size_t>(style.columns);
    double left = col * (style.panel_width + gutter) + kMarginLeft;
    double top = y_offset + row * style.panel_height + kMarginTop;
    return {left,  top,   style.panel_width - kMarginLeft - kMarginRight, style.panel_height - kMarginTop - kMarginBottom,
            x_min, x_max, y_min,
            y_max};
}

inline void check_style(const Style &style) {
    if (style.columns < 1 || style.panel_width < 100 || style.panel_height < 100) {
        throw std::invalid_argument("svg: panel layout too small");
    }
}

}  // namespace detail

/// Panels of polylines on p in [0, 1]; legend lists curves in input order.
inline std::string emit_lines(const std::vector<LinePanel> &panels, const Style &style) {
    detail::check_style(style);
    if (panels.empty()) {
        throw std::invalid_argument("svg: nothing to plot");
    }
    double x_min = INFINITY;
    double x_max = -INFINITY;
    for (const auto &p : panels) {
        if (p.curves.empty()) {
            throw std::invalid_argument("svg: empty panel");
        }
        for (const auto &c : p.curves) {
            if (c.x.empty() || c.x.size() != c.y.size()) {
                throw std::invalid_argument("svg: curve '" + c.label + "' is empty or ragged");
            }
            x_min = std::min(x_min, *std::min_element(c.x.begin(), c.x.end()));
            x_max = std::max(x_max, *std::max_element(c.x.begin(), c.x.end()));
        }
    }
    if (!(x_max > x_min)) {
        x_max = x_min + 1.0;
    }
    std::size_t cols = std::min<std::size_t>(panels.size(), static_cast<std::size_t>(style.columns));
    std::size_t rows = (panels.size() + style.columns - 1) / style.columns;
    constexpr double kLegend = 130;
    int width = static_cast<int>(cols) * static_cast<int>(style.panel_width + kLegend);
    int height = static_cast<int>(rows) * style.panel_height + 24;

    std::ostringstream os;
    detail::header(os, width, height, style.title);
    for (std::size_t i = 0; i < panels.size(); ++i) {
        auto f = detail::panel_frame(i, style, 24, kLegend, x_min, x_max, 0.0, 1.0);
        detail::axes(os, f, style, panels[i].title);
        std::size_t colour = 0;
        for (std::size_t k = 0; k < panels[i].curves.size(); ++k) {
            const auto &c = panels[i].curves[k];
            std::string stroke = c.reference ? "#808080" : detail::palette(colour++);
            os << "<polyline fill=\"none\" stroke=\"" << stroke << "\" stroke-width=\"1.5\"";
            if (c.reference) {
                os << " stroke-dasharray=\"2,3\"";
            }
            os << " points=\"";
            for (std::size_t j = 0; j < c.x.size(); ++j) {
                os << (j ? " " : "") << detail::num(f.px(c.x[j])) << ',' << detail::num(f.py(std::clamp(c.y[j], 0.0, 1.0)));
            }
            os << "\"><title>" << detail::escape(c.label) << "</title></polyline>\n";
            double ly = f.top + 10 + 13.0 * static_cast<double>(k);
            double lx = f.left + f.width + 6;
            os << "<line x1=\"" << detail::num(lx) << "\" y1=\"" << detail::num(ly) << "\" x2=\"" << detail::num(lx + 14)
               << "\" y2=\"" << detail::num(ly) << "\" stroke=\"" << stroke << "\" stroke-width=\"2\"/>\n";
            os << "<text class=\"legend\" x=\"" << detail::num(lx + 18) << "\" y=\"" << detail::num(ly + 3)
               << "\" font-family=\"sans-serif\" font-size=\"9\">" << detail::escape(c.label) << "</text>\n";
        }
    }
    os << "</svg>\n";
    return os.str();
}

/// Panels of cells coloured by p with a shared [0, 1] colour bar.
inline std::string emit_heatmaps(const std::vector<Heatmap> &maps, const Style &style) {
    detail::check_style(style);
    if (maps.empty()) {
        throw std::invalid_argument("svg: nothing to plot");
    }
    for (const auto &m : maps) {
        if (m.x_axis.empty() || m.y_axis.empty() || m.values.size() != m.x_axis.size() * m.y_axis.size()) {
            throw std::invalid_argument("svg: heatmap '" + m.title + "' has inconsistent dimensions");
        }
    }
    std::size_t cols = std::min<std::size_t>(maps.size(), static_cast<std::size_t>(style.columns));
    std::size_t rows = (maps.size() + style.columns - 1) / style.columns;
    int width = static_cast<int>(cols) * style.panel_width + 90;
    int height = static_cast<int>(rows) * style.panel_height + 24;

    std::ostringstream os;
    detail::header(os, width, height, style.title);
    for (std::size_t i = 0; i < maps.size(); ++i) {
        const auto &m = maps[i];
        auto edge = [](const std::vector<double> &a, bool lo) {
            if (a.size() == 1) {
                return lo ? a[0] - 0.5 : a[0] + 0.5;
            }
            return lo ? a.front() - (a[1] - a[0]) / 2 : a.back() + (a.back() - a[a.size() - 2]) / 2;
        };
        auto f = detail::panel_frame(i, style, 24, 0, edge(m.x_axis, true), edge(m.x_axis, false), edge(m.y_axis, true),
                                     edge(m.y_axis, false));
        auto cell_edges = [](const std::vector<double> &a, std::size_t j, double lo, double hi) {
            double left = j == 0 ? lo : (a[j - 1] + a[j]) / 2;
            double right = j + 1 == a.size() ? hi : (a[j] + a[j + 1]) / 2;
            return std::pair{left, right};
        };
        for (std::size_t yi = 0; yi < m.y_axis.size(); ++yi) {
            auto [y0, y1] = cell_edges(m.y_axis, yi, f.y_min, f.y_max);
            for (std::size_t xi = 0; xi < m.x_axis.size(); ++xi) {
                auto [x0, x1] = cell_edges(m.x_axis, xi, f.x_min, f.x_max);
                double v = m.values[yi * m.x_axis.size() + xi];
                os << "<rect x=\"" << detail::num(f.px(x0)) << "\" y=\"" << detail::num(f.py(y1)) << "\" width=\""
                   << detail::num(f.px(x1) - f.px(x0)) << "\" height=\"" << detail::num(f.py(y0) - f.py(y1))
                   << "\" fill=\"" << detail::hex(colormap(v)) << "\" shape-rendering=\"crispEdges\"/>\n";
            }
        }
        Style s = style;
        s.y_label = "delta";
        detail::axes(os, f, s, m.title,
                     detail::TickRange{m.x_axis.front(), m.x_axis.back(), m.y_axis.front(), m.y_axis.back()});
    }
    // colour bar
    double bx = width - 60;
    double by = 24 + detail::kMarginTop;
    double bh = style.panel_height - detail::kMarginTop - detail::kMarginBottom;
    constexpr int kSteps = 50;
    for (int k = 0; k < kSteps; ++k) {
        double v = (k + 0.5) / kSteps;
        os << "<rect x=\"" << detail::num(bx) << "\" y=\"" << detail::num(by + bh - (k + 1) * bh / kSteps)
           << "\" width=\"14\" height=\"" << detail::num(bh / kSteps + 0.01) << "\" fill=\""
           << detail::hex(colormap(v)) << "\"/>\n";
    }
    for (int k = 0; k <= 4; ++k) {
        os << "<text x=\"" << detail::num(bx + 18) << "\" y=\"" << detail::num(by + bh - k * bh / 4 + 3)
           << "\" font-family=\"sans-serif\" font-size=\"9\">" << detail::num(k / 4.0) << "</text>\n";
    }
    os << "</svg>\n";
    return os.str();
}

/// 1D records become one polyline, 2D records one heatmap.
inline std::string emit_svg(const std::vector<ProfileRecord> &records, const Style &style, const std::string &label,
                            bool noisy = false) {
    if (records.empty()) {
        throw std::invalid_argument("svg: no records");
    }
    std::vector<double> eps;
    std::vector<double> del;
    for (const auto &r : records) {
        if (del.empty() || r.delta != del.back()) {
            del.push_back(r.delta);
        }
    }
    std::vector<double> p;
    for (const auto &r : records) {
        if (r.delta == records.front().delta) {
            eps.push_back(r.epsilon);
        }
        p.push_back(record_probability(r, noisy));
    }
    if (del.size() == 1) {
        return emit_lines({{"", {{label, eps, p, false}}}}, style);
    }
    return emit_heatmaps({{label, eps, del, p}}, style);
}

}  // namespace cpulse::svg
