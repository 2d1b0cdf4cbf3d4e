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
#include <cstdint>
#include <cstdio>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "cpulse/su2.hpp"
#include "cpulse/tables.hpp"

namespace cpulse {

enum class Family { BB, NB, PbBofN, PbNofB, Universal, ThetaBB, ThetaNB, ThetaPB, Single };

inline constexpr std::string_view family_name(Family f) {
    switch (f) {
    case Family::BB:
        return "BB";
    case Family::NB:
        return "NB";
    case Family::PbBofN:
        return "PB_BofN";
    case Family::PbNofB:
        return "PB_NofB";
    case Family::Universal:
        return "UNIVERSAL";
    case Family::ThetaBB:
        return "THETA_BB";
    case Family::ThetaNB:
        return "THETA_NB";
    case Family::ThetaPB:
        return "THETA_PB";
    case Family::Single:
        return "SINGLE";
    }
    return "?";
}

inline Family parse_family_name(std::string_view s) {
    for (Family f : {Family::BB, Family::NB, Family::PbBofN, Family::PbNofB, Family::Universal, Family::ThetaBB,
                     Family::ThetaNB, Family::ThetaPB, Family::Single}) {
        if (family_name(f) == s) {
            return f;
        }
    }
    throw std::invalid_argument("unknown sequence family '" + std::string(s) + "'");
}

inline bool is_theta_family(Family f) {
    return f == Family::ThetaBB || f == Family::ThetaNB || f == Family::ThetaPB;
}

/// An ordered pulse train plus where it came from.
struct Sequence {
    std::vector<Pulse> pulses;
    Family family = Family::Single;
    double target_p = 1.0;
    std::string label;

    std::size_t n_pulses() const { return pulses.size(); }

    std::vector<double> phases_pi() const {
        std::vector<double> out;
        out.reserve(pulses.size());
        for (const auto &p : pulses) {
            out.push_back(p.phase_pi());
        }
        return out;
    }

    /// Total duration in units of the reference pi-pulse duration.
    double duration_fraction() const {
        double t = 0;
        for (const auto &p : pulses) {
            t += p.duration_fraction();
        }
        return t;
    }

    friend bool operator==(const Sequence &, const Sequence &) = default;
};

inline double sequence_probability(const Sequence &seq, const ErrorPoint &e) {
    return transition_probability(sequence_propagator(seq.pulses, e));
}

namespace detail {

inline void require_odd(int n, const char *what) {
    if (n < 3 || n % 2 == 0) {
        throw std::invalid_argument(std::string(what) + " must be odd and >= 3, got " + std::to_string(n));
    }
}

// numerator / n in units of pi, reduced mod 2 without rounding.
inline double rational_phase(std::int64_t numerator, std::int64_t n) {
    std::int64_t m = numerator % (2 * n);
    if (m < 0) {
        m += 2 * n;
    }
    return static_cast<double>(m) / static_cast<double>(n);
}

inline std::vector<Pulse> pi_pulses(std::span<const double> phases_pi) {
    std::vector<Pulse> out;
    out.reserve(phases_pi.size());
    for (double ph : phases_pi) {
        out.push_back(Pulse::b(ph));
    }
    return out;
}

inline std::vector<Pulse> theta_pulses(std::span<const double> phases_pi) {
    std::vector<Pulse> out;
    out.reserve(phases_pi.size());
    for (std::size_t k = 0; k < phases_pi.size(); ++k) {
        bool edge = k == 0 || k + 1 == phases_pi.size();
        out.emplace_back(edge ? 0.5 : 1.0, phases_pi[k]);
    }
    return out;
}

inline std::size_t target_index(double p) {
    for (std::size_t i = 0; i < tables::kThetaTargets.size(); ++i) {
        if (std::abs(p - tables::kThetaTargets[i]) < 1e-9) {
            return i;
        }
    }
    throw std::invalid_argument("target probability " + std::to_string(p) +
                                " is not tabulated (expected one of 0.1, 0.2, ..., 0.9)");
}

inline std::vector<double> theta_row(const std::vector<tables::ThetaColumn> &cols, const char *family, int n,
                                     double p) {
    for (const auto &c : cols) {
        if (c.n_pulses == n) {
            const auto &row = c.rows[target_index(p)];
            std::vector<double> phases{0.0};
            phases.insert(phases.end(), row.begin(), row.end());
            return phases;
        }
    }
    throw std::invalid_argument(std::string("no ") + family + " theta row with " + std::to_string(n) + " pulses");
}

inline std::string format_p(double p) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.1f", p);
    return buf;
}

}  // namespace detail

/// Broadband phases k(k-1)/N for k = 1..N, units of pi, in [0, 2).
inline std::vector<double> bb_phases(int n) {
    detail::require_odd(n, "BB length");
    std::vector<double> out;
    out.reserve(n);
    for (std::int64_t k = 1; k <= n; ++k) {
        out.push_back(detail::rational_phase(k * (k - 1), n));
    }
    return out;
}

/// Narrowband phases: k/N for even k, -(k-1)/N for odd k, units of pi.
inline std::vector<double> nb_phases(int n) {
    detail::require_odd(n, "NB length");
    std::vector<double> out;
    out.reserve(n);
    for (std::int64_t k = 1; k <= n; ++k) {
        out.push_back(detail::rational_phase(k % 2 == 0 ? k : -(k - 1), n));
    }
    return out;
}

inline Sequence single_pi() { return {{Pulse::b(0.0)}, Family::Single, 1.0, "single"}; }

inline Sequence bb(int n) {
    auto ph = bb_phases(n);
    return {detail::pi_pulses(ph), Family::BB, 1.0, "BB" + std::to_string(n)};
}

inline Sequence nb(int n) {
    auto ph = nb_phases(n);
    return {detail::pi_pulses(ph), Family::NB, 1.0, "NB" + std::to_string(n)};
}

/// B(N): a BB sequence of NB blocks; every second block runs in reverse
/// pulse order. Block k is offset by the k-th BB phase.
inline Sequence pb_b_of_n(int n_outer, int n_inner) {
    auto beta = bb_phases(n_outer);
    auto inner = nb_phases(n_inner);
    std::vector<double> phases;
    phases.reserve(static_cast<std::size_t>(n_outer) * n_inner);
    for (int k = 0; k < n_outer; ++k) {
        auto block = inner;
        if (k % 2 == 1) {
            std::reverse(block.begin(), block.end());
        }
        for (double ph : block) {
            phases.push_back(wrap_phase_pi(ph + beta[k]));
        }
    }
    return {detail::pi_pulses(phases), Family::PbBofN, 1.0,
            "B" + std::to_string(n_outer) + "(N" + std::to_string(n_inner) + ")"};
}

/// N(B): an NB sequence of BB blocks, no reversal.
inline Sequence pb_n_of_b(int n_outer, int n_inner) {
    auto nu = nb_phases(n_outer);
    auto inner = bb_phases(n_inner);
    std::vector<double> phases;
    phases.reserve(static_cast<std::size_t>(n_outer) * n_inner);
    for (int k = 0; k < n_outer; ++k) {
        for (double ph : inner) {
            phases.push_back(wrap_phase_pi(ph + nu[k]));
        }
    }
    return {detail::pi_pulses(phases), Family::PbNofB, 1.0,
            "N" + std::to_string(n_outer) + "(B" + std::to_string(n_inner) + ")"};
}

inline std::vector<std::string> universal_labels() {
    std::vector<std::string> out;
    for (const auto &r : tables::universal_rows()) {
        out.emplace_back(r.label);
    }
    return out;
}

inline Sequence universal(std::string_view label) {
    for (const auto &r : tables::universal_rows()) {
        if (r.label == label) {
            std::vector<double> phases;
            for (double v : r.numerators) {
                phases.push_back(v / r.denominator);
            }
            return {detail::pi_pulses(phases), Family::Universal, 1.0, std::string(label)};
        }
    }
    std::string valid;
    for (const auto &l : universal_labels()) {
        valid += (valid.empty() ? "" : ", ") + l;
    }
    throw std::invalid_argument("unknown universal label '" + std::string(label) + "' (valid: " + valid + ")");
}

/// A B...B A sequence from explicit phases (units of pi, first included).
inline Sequence theta_from_phases(std::span<const double> phases_pi, Family family, double target_p,
                                  std::string label) {
    if (phases_pi.size() < 2) {
        throw std::invalid_argument("theta sequence needs at least two pulses");
    }
    return {detail::theta_pulses(phases_pi), family, target_p, std::move(label)};
}

inline Sequence theta_bb(int n, double p) {
    auto ph = detail::theta_row(tables::theta_bb_columns(), "BB", n, p);
    return theta_from_phases(ph, Family::ThetaBB, p, "thetaBB" + std::to_string(n) + "(p=" + detail::format_p(p) + ")");
}

inline Sequence theta_nb(int n, double p) {
    auto ph = detail::theta_row(tables::theta_nb_columns(), "NB", n, p);
    return theta_from_phases(ph, Family::ThetaNB, p, "thetaNB" + std::to_string(n) + "(p=" + detail::format_p(p) + ")");
}

/// Twinning offset 2 arccos(sqrt(p)), in units of pi.
inline double twinning_offset_pi(double p) {
    if (!(p >= 0.0 && p <= 1.0)) {
        throw std::invalid_argument("target probability must lie in [0, 1]");
    }
    return 2.0 * std::acos(std::sqrt(p)) / kPi;
}

/// Passband theta pulse: the p = 0.5 NB half-pi sequence followed by its
/// pulse-order reverse with every phase advanced by the twinning offset.
inline Sequence theta_pb(int n_half, double p) {
    detail::target_index(p);
    Sequence half = theta_nb(n_half, 0.5);
    double offset = twinning_offset_pi(p);
    std::vector<Pulse> pulses = half.pulses;
    for (auto it = half.pulses.rbegin(); it != half.pulses.rend(); ++it) {
        pulses.push_back(it->shifted(offset));
    }
    return {std::move(pulses), Family::ThetaPB, p,
            "thetaPB" + std::to_string(2 * n_half) + "(p=" + detail::format_p(p) + ")"};
}

// JSON document: {label, family, target_p, pulses: [{area_pi_units, phase_pi_units}]}.
// Doubles are written in shortest round-trip form.

inline nlohmann::json sequence_to_json(const Sequence &s) {
    nlohmann::json pulses = nlohmann::json::array();
    for (const auto &p : s.pulses) {
        pulses.push_back({{"area_pi_units", p.area_pi()}, {"phase_pi_units", p.phase_pi()}});
    }
    return {{"label", s.label},
            {"family", std::string(family_name(s.family))},
            {"target_p", s.target_p},
            {"n_pulses", s.n_pulses()},
            {"pulses", pulses}};
}

inline Sequence sequence_from_json(const nlohmann::json &j) {
    Sequence s;
    s.label = j.at("label").get<std::string>();
    s.family = parse_family_name(j.at("family").get<std::string>());
    s.target_p = j.at("target_p").get<double>();
    if (!(s.target_p >= 0.0 && s.target_p <= 1.0)) {
        throw std::invalid_argument("target_p must lie in [0, 1]");
    }
    for (const auto &p : j.at("pulses")) {
        s.pulses.emplace_back(p.at("area_pi_units").get<double>(), p.at("phase_pi_units").get<double>());
    }
    if (s.pulses.empty()) {
        throw std::invalid_argument("sequence has no pulses");
    }
    if (j.contains("n_pulses") && j.at("n_pulses").get<std::size_t>() != s.pulses.size()) {
        throw std::invalid_argument("n_pulses does not match the pulse list");
    }
    return s;
}

}  // namespace cpulse
