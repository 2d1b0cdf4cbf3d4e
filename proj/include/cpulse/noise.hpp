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

/// Density-matrix evaluation of a pulse train with T1/T2 decay and
/// classical readout error.
///
/// Each pulse is applied exactly; the decay accumulated over its duration
/// is then applied as a discrete channel (amplitude damping followed by
/// pure dephasing). Per pulse tau/T1 is ~5e-4 on the reference device, so
/// the splitting error is far below anything visible in a profile.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "json.hpp"

#include "cpulse/sequences.hpp"
#include "cpulse/su2.hpp"

namespace cpulse {

struct NoiseParams {
    double t1 = 203.44e-6;              ///< seconds
    double t2 = 301.91e-6;              ///< seconds
    double pulse_duration = 100e-9;     ///< duration of a nominal pi pulse, seconds
    double readout_error = 0.0357;      ///< P(read 1 | state 0)
    double readout_error_1to0 = 0.0357; ///< P(read 0 | state 1)

    static NoiseParams defaults() { return {}; }

    /// No decay and perfect readout: reproduces the unitary result.
    static NoiseParams noiseless() {
        constexpr double inf = std::numeric_limits<double>::infinity();
        return {inf, inf, 100e-9, 0.0, 0.0};
    }

    /// Pure dephasing rate 1/T2 - 1/(2 T1).
    double dephasing_rate() const { return 1.0 / t2 - 0.5 / t1; }

    void validate() const {
        if (!(t1 > 0) || !(t2 > 0) || !(pulse_duration > 0) || !std::isfinite(pulse_duration)) {
            throw std::invalid_argument("noise: T1, T2 and pulse duration must be positive");
        }
        if (t2 > 2.0 * t1) {
            throw std::invalid_argument("noise: T2 must not exceed 2 T1");
        }
        for (double r : {readout_error, readout_error_1to0}) {
            if (!(r >= 0.0 && r < 0.5)) {
                throw std::invalid_argument("noise: readout error must lie in [0, 0.5)");
            }
        }
    }
};

// Times in the JSON section are microseconds / nanoseconds, as device
// calibration reports quote them.
inline NoiseParams noise_params_from_json(const nlohmann::json &j) {
    NoiseParams p;
    if (j.contains("t1_us")) {
        p.t1 = j.at("t1_us").get<double>() * 1e-6;
    }
    if (j.contains("t2_us")) {
        p.t2 = j.at("t2_us").get<double>() * 1e-6;
    }
    if (j.contains("pulse_duration_ns")) {
        p.pulse_duration = j.at("pulse_duration_ns").get<double>() * 1e-9;
    }
    if (j.contains("readout_error")) {
        p.readout_error = j.at("readout_error").get<double>();
        p.readout_error_1to0 = p.readout_error;
    }
    if (j.contains("readout_error_1to0")) {
        p.readout_error_1to0 = j.at("readout_error_1to0").get<double>();
    }
    p.validate();
    return p;
}

inline nlohmann::json noise_params_to_json(const NoiseParams &p) {
    return {{"t1_us", p.t1 * 1e6},
            {"t2_us", p.t2 * 1e6},
            {"pulse_duration_ns", p.pulse_duration * 1e9},
            {"readout_error", p.readout_error},
            {"readout_error_1to0", p.readout_error_1to0}};
}

/// Hermitian, unit-trace, positive semidefinite 2x2 state.
struct Density2 {
    Matrix2 rho{1.0, 0.0, 0.0, 0.0};

    static Density2 ground() { return {}; }

    double trace() const { return (rho.a11 + rho.a22).real(); }
    double excited_population() const { return rho.a22.real(); }

    bool is_valid(double tol = 1e-10) const {
        bool hermitian = std::abs(rho.a12 - std::conj(rho.a21)) < tol && std::abs(rho.a11.imag()) < tol &&
                         std::abs(rho.a22.imag()) < tol;
        double a = rho.a11.real();
        double d = rho.a22.real();
        double det = a * d - std::norm(rho.a12);
        return hermitian && std::abs(trace() - 1.0) < 1e-12 && a > -tol && d > -tol && det > -tol;
    }
};

using KrausPair = std::array<Matrix2, 2>;

/// |1> -> |0> decay with probability gamma.
inline KrausPair amplitude_damping_kraus(double gamma) {
    return {Matrix2{1.0, 0.0, 0.0, std::sqrt(1.0 - gamma)}, Matrix2{0.0, std::sqrt(gamma), 0.0, 0.0}};
}

/// Coherences scaled by sqrt(1 - lambda), populations untouched.
inline KrausPair phase_damping_kraus(double lambda) {
    return {Matrix2{1.0, 0.0, 0.0, std::sqrt(1.0 - lambda)}, Matrix2{0.0, 0.0, 0.0, std::sqrt(lambda)}};
}

inline Density2 apply_kraus(const Density2 &s, const KrausPair &k) {
    Matrix2 out = k[0] * s.rho * k[0].adjoint();
    out = out + k[1] * s.rho * k[1].adjoint();
    return {out};
}

inline Density2 apply_unitary(const Density2 &s, const Unitary2 &u) { return {u * s.rho * u.adjoint()}; }

/// Decay over `duration` seconds.
inline Density2 apply_decay(const Density2 &s, double duration, const NoiseParams &params) {
    double gamma1 = -std::expm1(-duration / params.t1);
    double lambda = -std::expm1(-2.0 * params.dephasing_rate() * duration);
    return apply_kraus(apply_kraus(s, amplitude_damping_kraus(gamma1)), phase_damping_kraus(lambda));
}

/// A probability as reported by the measurement chain. The readout map is
/// affine, not an involution, so it must be applied exactly once.
struct MeasuredProbability {
    double value = 0.0;
    bool readout_applied = false;
};

inline MeasuredProbability apply_readout(MeasuredProbability p, const NoiseParams &params) {
    if (p.readout_applied) {
        throw std::logic_error("readout error already applied");
    }
    double v = p.value * (1.0 - params.readout_error_1to0) + (1.0 - p.value) * params.readout_error;
    return {std::clamp(v, 0.0, 1.0), true};
}

/// Final density matrix after the sequence, before readout.
inline Density2 evolve_noisy(const Sequence &seq, const ErrorPoint &e, const NoiseParams &params) {
    params.validate();
    e.validate();
    if (seq.pulses.empty()) {
        throw std::invalid_argument("noisy evolution of an empty sequence");
    }
    Density2 state = Density2::ground();
    for (const auto &p : seq.pulses) {
        state = apply_unitary(state, detail::pulse_propagator_unchecked(p, e.epsilon, e.delta));
        state = apply_decay(state, p.duration_fraction() * params.pulse_duration, params);
    }
    return state;
}

inline double noisy_transition_probability(const Sequence &seq, const ErrorPoint &e, const NoiseParams &params) {
    Density2 final_state = evolve_noisy(seq, e, params);
    double p = final_state.excited_population();
    if (!(p <= 1.0 + kProbabilityTolerance && p >= -kProbabilityTolerance)) {
        throw std::logic_error("noisy population out of range: " + std::to_string(p));
    }
    return apply_readout({std::clamp(p, 0.0, 1.0), false}, params).value;
}

}  // namespace cpulse
