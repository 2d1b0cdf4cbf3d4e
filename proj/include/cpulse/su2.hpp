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

/// Exact propagators of rectangular pulses on a driven two-level system.
///
/// Conventions used everywhere in cpulse:
///  * Pulse areas and phases are carried in units of pi. A "B" pulse has
///    area 1 (a pi pulse), an "A" pulse has area 1/2.
///  * The Rabi frequency of every pulse is the nominal pi-pulse Rabi
///    frequency Omega0 = pi / T_ref, so a pulse lasts area_pi * T_ref.
///  * An error point (epsilon, delta) scales the Rabi frequency by
///    (1 + epsilon) and adds a detuning delta * Omega0.
///  * H = 1/2 [[-Delta, Omega e^{i phi}], [Omega e^{-i phi}, Delta]], so an
///    ideal pi pulse with phase 0 maps |0> to -i|1>.
///  * Sequence propagators are U_N ... U_1 with pulse 1 applied first.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>

namespace cpulse {

using Complex = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;

/// Reduces a phase given in units of pi into [0, 2).
inline double wrap_phase_pi(double phase_pi) {
    if (!std::isfinite(phase_pi)) {
        throw std::invalid_argument("phase must be finite");
    }
    double r = std::fmod(phase_pi, 2.0);
    if (r < 0) {
        r += 2.0;
    }
    if (r >= 2.0) {
        r = 0.0;
    }
    return r;
}

/// A general complex 2x2 matrix, row-major.
struct Matrix2 {
    Complex a11{1.0};
    Complex a12{0.0};
    Complex a21{0.0};
    Complex a22{1.0};

    static constexpr Matrix2 identity() { return {}; }

    Matrix2 adjoint() const {
        return {std::conj(a11), std::conj(a21), std::conj(a12), std::conj(a22)};
    }

    /// Entrywise complex conjugate.
    Matrix2 conjugate() const {
        return {std::conj(a11), std::conj(a12), std::conj(a21), std::conj(a22)};
    }

    Complex det() const { return a11 * a22 - a12 * a21; }

    friend Matrix2 operator*(const Matrix2 &l, const Matrix2 &r) {
        return {
            l.a11 * r.a11 + l.a12 * r.a21,
            l.a11 * r.a12 + l.a12 * r.a22,
            l.a21 * r.a11 + l.a22 * r.a21,
            l.a21 * r.a12 + l.a22 * r.a22,
        };
    }

    friend Matrix2 operator+(const Matrix2 &l, const Matrix2 &r) {
        return {l.a11 + r.a11, l.a12 + r.a12, l.a21 + r.a21, l.a22 + r.a22};
    }

    friend bool operator==(const Matrix2 &, const Matrix2 &) = default;
};

/// The propagator type. Unitarity is not enforced on construction; use
/// unitarity_defect() / is_unitary() to validate.
using Unitary2 = Matrix2;

/// max_ij |(U^dagger U - I)_ij|
inline double unitarity_defect(const Matrix2 &u) {
    Matrix2 g = u.adjoint() * u;
    return std::max({std::abs(g.a11 - 1.0), std::abs(g.a12), std::abs(g.a21), std::abs(g.a22 - 1.0)});
}

inline bool is_unitary(const Matrix2 &u, double tol = 1e-12) {
    return unitarity_defect(u) < tol && std::abs(std::abs(u.det()) - 1.0) < tol;
}

/// One rectangular drive segment. Stored in units of pi.
class Pulse {
  public:
    Pulse(double area_pi, double phase_pi) : area_pi_(area_pi), phase_pi_(wrap_phase_pi(phase_pi)) {
        if (!(area_pi > 0) || !std::isfinite(area_pi)) {
            throw std::invalid_argument("pulse area must be positive and finite");
        }
    }

    static Pulse a(double phase_pi) { return Pulse(0.5, phase_pi); }
    static Pulse b(double phase_pi) { return Pulse(1.0, phase_pi); }

    double area_pi() const { return area_pi_; }
    double phase_pi() const { return phase_pi_; }
    double area() const { return area_pi_ * kPi; }
    double phase() const { return phase_pi_ * kPi; }
    /// Duration in units of the reference pi-pulse duration.
    double duration_fraction() const { return area_pi_; }

    Pulse shifted(double delta_phase_pi) const { return Pulse(area_pi_, phase_pi_ + delta_phase_pi); }

    friend bool operator==(const Pulse &, const Pulse &) = default;

  private:
    double area_pi_;
    double phase_pi_;
};

/// Relative Rabi-frequency error and detuning in units of Omega0.
struct ErrorPoint {
    double epsilon = 0.0;
    double delta = 0.0;

    void validate() const {
        if (!std::isfinite(epsilon) || !std::isfinite(delta)) {
            throw std::invalid_argument("error point must be finite");
        }
        if (epsilon < -1.0) {
            throw std::invalid_argument("epsilon must be >= -1, got " + std::to_string(epsilon));
        }
    }
};

namespace detail {

// No precondition on epsilon: the solver expands around epsilon = -1 and
// needs both sides of it.
inline Unitary2 pulse_propagator_unchecked(const Pulse &p, double epsilon, double delta) {
    double rabi_angle = (1.0 + epsilon) * p.area();
    double detuning_angle = delta * kPi * p.duration_fraction();
    double angle = std::hypot(rabi_angle, detuning_angle);
    if (angle == 0.0) {
        return Unitary2::identity();
    }
    double c = std::cos(angle / 2);
    double s = std::sin(angle / 2);
    double phi = p.phase();
    double nx = rabi_angle * std::cos(phi) / angle;
    double ny = -rabi_angle * std::sin(phi) / angle;
    double nz = -detuning_angle / angle;
    const Complex i{0.0, 1.0};
    // c I - i s (nx sx + ny sy + nz sz)
    return {
        Complex{c, -s * nz},
        -i * s * Complex{nx, -ny},
        -i * s * Complex{nx, ny},
        Complex{c, s * nz},
    };
}

}  // namespace detail

inline Unitary2 pulse_propagator(const Pulse &p, const ErrorPoint &e) {
    e.validate();
    return detail::pulse_propagator_unchecked(p, e.epsilon, e.delta);
}

/// Ordered product U_N ... U_1 of propagators given in application order.
inline Unitary2 compose(std::span<const Unitary2> steps) {
    if (steps.empty()) {
        throw std::invalid_argument("compose: empty propagator list");
    }
    Unitary2 total = steps.front();
    for (const auto &u : steps.subspan(1)) {
        total = u * total;
    }
    return total;
}

/// Propagator of a pulse train at one error point.
inline Unitary2 sequence_propagator(std::span<const Pulse> pulses, const ErrorPoint &e) {
    if (pulses.empty()) {
        throw std::invalid_argument("sequence_propagator: empty pulse list");
    }
    e.validate();
    Unitary2 total = Unitary2::identity();
    for (const auto &p : pulses) {
        total = detail::pulse_propagator_unchecked(p, e.epsilon, e.delta) * total;
    }
    return total;
}

inline constexpr double kProbabilityTolerance = 1e-9;

/// |<1|U|0>|^2, clamped to [0, 1]. Overshoot beyond the tolerance means the
/// matrix was not unitary and is reported as a logic error.
inline double transition_probability(const Unitary2 &u) {
    double p = std::norm(u.a21);
    if (!(p <= 1.0 + kProbabilityTolerance)) {
        throw std::logic_error("transition probability out of range: " + std::to_string(p));
    }
    return std::clamp(p, 0.0, 1.0);
}

/// |<0|U|0>|^2, i.e. 1 - p for a unitary, without the cancellation in 1 - p.
inline double survival_probability(const Unitary2 &u) { return std::clamp(std::norm(u.a11), 0.0, 1.0); }

}  // namespace cpulse
