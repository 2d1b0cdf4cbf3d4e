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

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "cpulse/noise.hpp"
#include "cpulse/parallel.hpp"
#include "cpulse/sequences.hpp"

namespace cpulse {

/// Extra dense points laid over [-half_width, half_width] around eps = 0.
struct Refinement {
    double half_width = 0.1;
    int points = 2001;
};

/// Scan grid. With delta_points == 1 the scan is 1D at detuning delta_min
/// (0 by default); default_2d() spans [-1, 1] x [-1, 1] at 101 x 101.
struct GridSpec {
    double eps_min = -1.0;
    double eps_max = 1.0;
    int eps_points = 201;
    double delta_min = 0.0;
    double delta_max = 0.0;
    int delta_points = 1;
    std::optional<Refinement> refine;

    static GridSpec default_1d() { return {}; }
    static GridSpec default_2d() { return {-1.0, 1.0, 101, -1.0, 1.0, 101, std::nullopt}; }

    void validate() const {
        if (!std::isfinite(eps_min) || !std::isfinite(eps_max) || !std::isfinite(delta_min) ||
            !std::isfinite(delta_max)) {
            throw std::invalid_argument("grid bounds must be finite");
        }
        if (eps_min < -1.0) {
            throw std::invalid_argument("grid: eps_min must be >= -1");
        }
        if (eps_points < 1 || delta_points < 1) {
            throw std::invalid_argument("grid: point counts must be >= 1");
        }
        if (eps_points > 1 && !(eps_max > eps_min)) {
            throw std::invalid_argument("grid: eps_max must exceed eps_min");
        }
        if (delta_points > 1 && !(delta_max > delta_min)) {
            throw std::invalid_argument("grid: delta_max must exceed delta_min");
        }
        if (refine) {
            if (!(refine->half_width > 0) || refine->points < 2) {
                throw std::invalid_argument("grid: refinement needs a positive width and >= 2 points");
            }
            if (-refine->half_width < -1.0) {
                throw std::invalid_argument("grid: refinement must stay within eps >= -1");
            }
        }
    }
};

namespace detail {

inline std::vector<double> linspace(double lo, double hi, int n) {
    std::vector<double> out(static_cast<std::size_t>(n));
    if (n == 1) {
        out[0] = lo;
        return out;
    }
    for (int i = 0; i < n; ++i) {
        out[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    }
    out.back() = hi;
    return out;
}

}  // namespace detail

/// Sorted epsilon samples, including the refinement points when requested.
inline std::vector<double> epsilon_axis(const GridSpec &g) {
    g.validate();
    auto eps = detail::linspace(g.eps_min, g.eps_max, g.eps_points);
    if (g.refine) {
        auto dense = detail::linspace(-g.refine->half_width, g.refine->half_width, g.refine->points);
        eps.insert(eps.end(), dense.begin(), dense.end());
        std::sort(eps.begin(), eps.end());
        eps.erase(std::unique(eps.begin(), eps.end()), eps.end());
    }
    return eps;
}

inline std::vector<double> delta_axis(const GridSpec &g) {
    g.validate();
    return detail::linspace(g.delta_min, g.delta_max, g.delta_points);
}

struct ProfileRecord {
    double epsilon = 0.0;
    double delta = 0.0;
    double probability_ideal = 0.0;
    std::optional<double> probability_noisy;

    friend bool operator==(const ProfileRecord &, const ProfileRecord &) = default;
};

struct ScanOptions {
    std::optional<NoiseParams> noise;
    unsigned threads = 0;  ///< 0: scan_thread_count()
};

namespace detail {

inline std::vector<ProfileRecord> scan_points(const Sequence &seq, const std::vector<ErrorPoint> &points,
                                              const ScanOptions &opt) {
    if (seq.pulses.empty()) {
        throw std::invalid_argument("scan: sequence has no pulses");
    }
    if (opt.noise) {
        opt.noise->validate();
    }
    std::vector<ProfileRecord> out(points.size());
    unsigned threads = opt.threads == 0 ? scan_thread_count() : opt.threads;
    parallel_for(points.size(), threads, [&](std::size_t i) {
        const ErrorPoint &e = points[i];
        ProfileRecord r{e.epsilon, e.delta, sequence_probability(seq, e), std::nullopt};
        if (opt.noise) {
            r.probability_noisy = noisy_transition_probability(seq, e, *opt.noise);
        }
        out[i] = r;
    });
    return out;
}

}  // namespace detail

/// One record per epsilon sample at fixed detuning delta_min.
inline std::vector<ProfileRecord> scan_1d(const Sequence &seq, const GridSpec &grid, const ScanOptions &opt = {}) {
    grid.validate();
    if (grid.delta_points != 1) {
        throw std::invalid_argument("scan_1d: grid must have exactly one detuning point");
    }
    std::vector<ErrorPoint> points;
    for (double eps : epsilon_axis(grid)) {
        points.push_back({eps, grid.delta_min});
    }
    return detail::scan_points(seq, points, opt);
}

/// Row-major records: detuning is the outer index, epsilon the inner.
inline std::vector<ProfileRecord> scan_2d(const Sequence &seq, const GridSpec &grid, const ScanOptions &opt = {}) {
    grid.validate();
    std::vector<ErrorPoint> points;
    auto eps = epsilon_axis(grid);
    for (double d : delta_axis(grid)) {
        for (double e : eps) {
            points.push_back({e, d});
        }
    }
    return detail::scan_points(seq, points, opt);
}

inline double record_probability(const ProfileRecord &r, bool noisy) {
    if (noisy) {
        if (!r.probability_noisy) {
            throw std::invalid_argument("record has no noisy probability");
        }
        return *r.probability_noisy;
    }
    return r.probability_ideal;
}

struct MetricOptions {
    double flat_level = 0.99;
    double wing_offset = 0.5;  ///< wings: |eps - eps_peak| > wing_offset
    bool use_noisy = false;
};

struct ProfileMetrics {
    double peak = 0.0;
    double peak_epsilon = 0.0;
    double fwhm_eps = 0.0;
    double flat_top_width = 0.0;
    double wing_level = 0.0;
    bool degenerate = false;       ///< all-zero profile; fwhm reported as 0
    bool fwhm_truncated = false;   ///< half maximum not reached before a grid edge
};

namespace detail {

struct Profile1d {
    std::vector<double> eps;
    std::vector<double> p;
};

inline Profile1d extract_profile(const std::vector<ProfileRecord> &records, bool noisy) {
    if (records.size() < 3) {
        throw std::invalid_argument("profile metrics need at least 3 records");
    }
    Profile1d prof;
    for (const auto &r : records) {
        if (r.delta != records.front().delta) {
            throw std::invalid_argument("profile metrics need a 1D scan (single detuning)");
        }
        prof.eps.push_back(r.epsilon);
        prof.p.push_back(record_probability(r, noisy));
    }
    for (std::size_t i = 1; i < prof.eps.size(); ++i) {
        if (!(prof.eps[i] > prof.eps[i - 1])) {
            throw std::invalid_argument("profile metrics need strictly increasing epsilon");
        }
    }
    return prof;
}

// Peak index; among equal maxima the one closest to eps = 0.
inline std::size_t peak_index(const Profile1d &prof) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < prof.p.size(); ++i) {
        if (prof.p[i] > prof.p[best] ||
            (prof.p[i] == prof.p[best] && std::abs(prof.eps[i]) < std::abs(prof.eps[best]))) {
            best = i;
        }
    }
    return best;
}

struct Crossing {
    double lo;
    double hi;
    bool truncated;
};

// Contiguous region around `start` where p >= level, with linearly
// interpolated end points.
inline Crossing level_crossing(const Profile1d &prof, std::size_t start, double level) {
    Crossing c{prof.eps.front(), prof.eps.back(), false};
    std::size_t i = start;
    while (i > 0 && prof.p[i - 1] >= level) {
        --i;
    }
    if (i == 0) {
        c.truncated = true;
    } else {
        double t = (level - prof.p[i - 1]) / (prof.p[i] - prof.p[i - 1]);
        c.lo = prof.eps[i - 1] + t * (prof.eps[i] - prof.eps[i - 1]);
    }
    std::size_t j = start;
    while (j + 1 < prof.p.size() && prof.p[j + 1] >= level) {
        ++j;
    }
    if (j + 1 == prof.p.size()) {
        c.truncated = true;
    } else {
        double t = (prof.p[j] - level) / (prof.p[j] - prof.p[j + 1]);
        c.hi = prof.eps[j] + t * (prof.eps[j + 1] - prof.eps[j]);
    }
    return c;
}

}  // namespace detail

/// Full width at half maximum in epsilon, by linear interpolation.
inline double fwhm(const std::vector<ProfileRecord> &records, bool noisy = false) {
    auto prof = detail::extract_profile(records, noisy);
    std::size_t ip = detail::peak_index(prof);
    if (prof.p[ip] <= 0.0) {
        return 0.0;
    }
    auto c = detail::level_crossing(prof, ip, prof.p[ip] / 2);
    return c.hi - c.lo;
}

/// Epsilon extent of the region around the peak where p >= level; 0 when
/// the peak is below level.
inline double flat_top_width(const std::vector<ProfileRecord> &records, double level, bool noisy = false) {
    auto prof = detail::extract_profile(records, noisy);
    std::size_t ip = detail::peak_index(prof);
    if (prof.p[ip] < level) {
        return 0.0;
    }
    auto c = detail::level_crossing(prof, ip, level);
    return c.hi - c.lo;
}

/// Largest p with |eps - eps_peak| > offset; 0 if no samples lie there.
inline double wing_level(const std::vector<ProfileRecord> &records, double offset, bool noisy = false) {
    auto prof = detail::extract_profile(records, noisy);
    double centre = prof.eps[detail::peak_index(prof)];
    double w = 0.0;
    for (std::size_t i = 0; i < prof.p.size(); ++i) {
        if (std::abs(prof.eps[i] - centre) > offset) {
            w = std::max(w, prof.p[i]);
        }
    }
    return w;
}

inline ProfileMetrics profile_metrics(const std::vector<ProfileRecord> &records, const MetricOptions &opt = {}) {
    auto prof = detail::extract_profile(records, opt.use_noisy);
    ProfileMetrics m;
    std::size_t ip = detail::peak_index(prof);
    m.peak = prof.p[ip];
    m.peak_epsilon = prof.eps[ip];
    if (m.peak <= 0.0) {
        m.degenerate = true;
        return m;
    }
    auto half = detail::level_crossing(prof, ip, m.peak / 2);
    m.fwhm_eps = half.hi - half.lo;
    m.fwhm_truncated = half.truncated;
    m.flat_top_width = flat_top_width(records, opt.flat_level, opt.use_noisy);
    m.wing_level = wing_level(records, opt.wing_offset, opt.use_noisy);
    return m;
}

/// Fraction of records with p > level.
inline double fraction_above(const std::vector<ProfileRecord> &records, double level, bool noisy = false) {
    if (records.empty()) {
        throw std::invalid_argument("fraction_above: no records");
    }
    std::size_t count = 0;
    for (const auto &r : records) {
        count += record_probability(r, noisy) > level ? 1 : 0;
    }
    return static_cast<double>(count) / static_cast<double>(records.size());
}

inline double peak_probability(const std::vector<ProfileRecord> &records, bool noisy = false) {
    double best = 0.0;
    for (const auto &r : records) {
        best = std::max(best, record_probability(r, noisy));
    }
    return best;
}

namespace detail {

inline std::string format_g12(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

}  // namespace detail

/// Header epsilon,delta,p_ideal[,p_noisy]; 12 significant digits; record order.
inline void write_csv(std::ostream &os, const std::vector<ProfileRecord> &records) {
    bool noisy = std::any_of(records.begin(), records.end(), [](const auto &r) { return r.probability_noisy; });
    os << (noisy ? "epsilon,delta,p_ideal,p_noisy\n" : "epsilon,delta,p_ideal\n");
    for (const auto &r : records) {
        os << detail::format_g12(r.epsilon) << ',' << detail::format_g12(r.delta) << ','
           << detail::format_g12(r.probability_ideal);
        if (noisy) {
            os << ',' << (r.probability_noisy ? detail::format_g12(*r.probability_noisy) : std::string{});
        }
        os << '\n';
    }
}

inline nlohmann::json records_to_json(const std::vector<ProfileRecord> &records) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto &r : records) {
        nlohmann::json o{{"epsilon", r.epsilon}, {"delta", r.delta}, {"p_ideal", r.probability_ideal}};
        if (r.probability_noisy) {
            o["p_noisy"] = *r.probability_noisy;
        }
        arr.push_back(std::move(o));
    }
    return arr;
}

}  // namespace cpulse
