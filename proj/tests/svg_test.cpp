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


#include "cpulse/svg.hpp"

#include <regex>
#include <string>
#include <vector>

#include "gtest/gtest.h"

using namespace cpulse;

namespace {

int count(const std::string &s, const std::string &needle) {
    int n = 0;
    for (auto pos = s.find(needle); pos != std::string::npos; pos = s.find(needle, pos + 1)) {
        ++n;
    }
    return n;
}

// Open/close tag balance, enough to catch a truncated or interleaved document.
bool balanced(const std::string &svg) {
    std::vector<std::string> stack;
    std::regex tag(R"(<(/?)([a-zA-Z]+)[^>]*?(/?)>)");
    for (auto it = std::sregex_iterator(svg.begin(), svg.end(), tag); it != std::sregex_iterator(); ++it) {
        const auto &m = *it;
        if (m[3] == "/") {
            continue;
        }
        if (m[1] == "/") {
            if (stack.empty() || stack.back() != m[2]) {
                return false;
            }
            stack.pop_back();
        } else {
            stack.push_back(m[2]);
        }
    }
    return stack.empty();
}

std::vector<std::pair<double, double>> polyline_points(const std::string &svg, std::size_t which = 0) {
    std::size_t pos = 0;
    for (std::size_t k = 0; k <= which; ++k) {
        pos = svg.find("points=\"", pos) + 8;
    }
    auto end = svg.find('"', pos);
    std::vector<std::pair<double, double>> pts;
    std::stringstream ss(svg.substr(pos, end - pos));
    std::string pair;
    while (ss >> pair) {
        auto comma = pair.find(',');
        pts.emplace_back(std::stod(pair.substr(0, comma)), std::stod(pair.substr(comma + 1)));
    }
    return pts;
}

std::vector<ProfileRecord> profile(const Sequence &s) { return scan_1d(s, GridSpec::default_1d()); }

}  // namespace

TEST(svg, single_pulse_line) {
    auto doc = svg::emit_svg(profile(single_pi()), {}, "single");
    EXPECT_TRUE(doc.starts_with("<?xml"));
    EXPECT_TRUE(doc.ends_with("</svg>\n"));
    EXPECT_TRUE(balanced(doc));
    EXPECT_EQ(count(doc, "<polyline"), 1);
    auto pts = polyline_points(doc);
    ASSERT_EQ(pts.size(), 201u);
    // smallest y pixel is the highest probability
    auto top = std::min_element(pts.begin(), pts.end(), [](auto a, auto b) { return a.second < b.second; });
    EXPECT_EQ(top - pts.begin(), 100);
}

TEST(svg, overlay_keeps_legend_order) {
    std::vector<svg::Curve> curves;
    for (int n : {3, 5, 9, 15}) {
        std::vector<double> x;
        std::vector<double> y;
        for (const auto &r : profile(bb(n))) {
            x.push_back(r.epsilon);
            y.push_back(r.probability_ideal);
        }
        curves.push_back({"BB" + std::to_string(n), x, y, false});
    }
    auto doc = svg::emit_lines({{"BB", curves}}, {});
    EXPECT_TRUE(balanced(doc));
    EXPECT_EQ(count(doc, "<polyline"), 4);
    auto p3 = doc.find("class=\"legend\" x=");
    std::vector<std::size_t> at;
    for (const char *l : {">BB3<", ">BB5<", ">BB9<", ">BB15<"}) {
        at.push_back(doc.find(l, p3));
    }
    EXPECT_TRUE(std::is_sorted(at.begin(), at.end()));
    EXPECT_EQ(std::adjacent_find(at.begin(), at.end()), at.end());
}

TEST(svg, reference_curve_is_gray_dotted) {
    std::vector<double> x{-1, 0, 1};
    std::vector<double> y{0, 1, 0};
    auto doc = svg::emit_lines({{"", {{"a", x, y, false}, {"single pulse", x, y, true}}}}, {});
    EXPECT_EQ(count(doc, "stroke-dasharray"), 1);
    EXPECT_EQ(count(doc, "#808080"), 2);  // polyline and legend swatch
}

TEST(svg, heatmap_cells_and_colour_scale) {
    auto r = scan_2d(universal("U3"), GridSpec{-1, 1, 21, -1, 1, 11, std::nullopt});
    auto doc = svg::emit_svg(r, {}, "U3");
    EXPECT_TRUE(balanced(doc));
    // 21 x 11 cells, 50 colour-bar steps, 1 background, 1 frame
    EXPECT_EQ(count(doc, "<rect"), 21 * 11 + 50 + 2);
    double prev = -1;
    for (int k = 0; k <= 100; ++k) {
        double l = svg::luminance(svg::colormap(k / 100.0));
        EXPECT_GE(l, prev) << k;
        prev = l;
    }
    EXPECT_GT(svg::luminance(svg::colormap(1.0)), svg::luminance(svg::colormap(0.0)) + 150);
}

TEST(svg, deterministic_bytes) {
    auto a = svg::emit_svg(profile(nb(9)), {}, "NB9");
    auto b = svg::emit_svg(profile(nb(9)), {}, "NB9");
    EXPECT_EQ(a, b);
}

TEST(svg, escapes_text) {
    std::vector<double> x{0, 1};
    std::vector<double> y{0, 1};
    svg::Style style;
    style.title = "a<b & c";
    auto doc = svg::emit_lines({{"", {{"p=\"x\"", x, y, false}}}}, style);
    EXPECT_NE(doc.find("a&lt;b &amp; c"), std::string::npos);
    EXPECT_NE(doc.find("p=&quot;x&quot;"), std::string::npos);
}

TEST(svg, empty_input_rejected) {
    EXPECT_THROW(svg::emit_svg({}, {}, "x"), std::invalid_argument);
    EXPECT_THROW(svg::emit_lines({}, {}), std::invalid_argument);
    EXPECT_THROW(svg::emit_lines({{"", {}}}, {}), std::invalid_argument);
    EXPECT_THROW(svg::emit_heatmaps({}, {}), std::invalid_argument);
    EXPECT_THROW(svg::emit_heatmaps({{"x", {0, 1}, {0}, {0.5}}}, {}), std::invalid_argument);
    std::vector<double> x{0, 1};
    std::vector<double> y{0};
    EXPECT_THROW(svg::emit_lines({{"", {{"bad", x, y, false}}}}, {}), std::invalid_argument);
}
