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

// Truncated Taylor expansion of a resonant sequence propagator in the Rabi
// error, U(eps0 + x) = sum_k C_k x^k. Coefficients are exact up to rounding,
// which high-order finite differences are not.

#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

#include "cpulse/su2.hpp"

namespace cpulse {

/// Coefficients c[0..order] of a complex power series.
using Series = std::vector<Complex>;

namespace detail {

inline Series series_mul(const Series &a, const Series &b) {
    Series out(a.size(), Complex{});
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == Complex{}) {
            continue;
        }
        for (std::size_t j = 0; i + j < out.size(); ++j) {
            out[i + j] += a[i] * b[j];
        }
    }
    return out;
}

inline void series_add_to(Series &acc, const Series &a) {
    for (std::size_t i = 0; i < acc.size(); ++i) {
        acc[i] += a[i];
    }
}

}  // namespace detail

/// 2x2 matrix of power series in x = eps - eps0.
struct MatrixSeries {
    Series a11, a12, a21, a22;

    explicit MatrixSeries(std::size_t terms)
        : a11(terms, Complex{}), a12(terms, Complex{}), a21(terms, Complex{}), a22(terms, Complex{}) {
        a11[0] = 1.0;
        a22[0] = 1.0;
    }

    std::size_t terms() const { return a11.size(); }

    friend MatrixSeries operator*(const MatrixSeries &l, const MatrixSeries &r) {
        using detail::series_add_to;
        using detail::series_mul;
        MatrixSeries out(l.terms());
        out.a11 = series_mul(l.a11, r.a11);
        series_add_to(out.a11, series_mul(l.a12, r.a21));
        out.a12 = series_mul(l.a11, r.a12);
        series_add_to(out.a12, series_mul(l.a12, r.a22));
        out.a21 = series_mul(l.a21, r.a11);
        series_add_to(out.a21, series_mul(l.a22, r.a21));
        out.a22 = series_mul(l.a21, r.a12);
        series_add_to(out.a22, series_mul(l.a22, r.a22));
        return out;
    }
};

/// Expansion of one resonant pulse: cos(a + b x) I - i sin(a + b x) (n . sigma)
/// with a = (1 + eps0) A / 2, b = A / 2.
inline MatrixSeries pulse_series(const Pulse &p, double eps0, std::size_t terms) {
    double a = (1.0 + eps0) * p.area() / 2;
    double b = p.area() / 2;
    MatrixSeries m(terms);
    // d^k/dx^k cos(a + b x) = b^k cos(a + k pi / 2)
    double ca = std::cos(a);
    double sa = std::sin(a);
    const double cos_cycle[4] = {ca, -sa, -ca, sa};
    const double sin_cycle[4] = {sa, ca, -sa, -ca};
    double scale = 1.0;
    const Complex i{0.0, 1.0};
    Complex up = -i * std::polar(1.0, p.phase());
    Complex down = -i * std::polar(1.0, -p.phase());
    for (std::size_t k = 0; k < terms; ++k) {
        double c = cos_cycle[k % 4] * scale;
        double s = sin_cycle[k % 4] * scale;
        m.a11[k] = c;
        m.a22[k] = c;
        m.a12[k] = up * s;
        m.a21[k] = down * s;
        scale *= b / static_cast<double>(k + 1);
    }
    return m;
}

/// Expansion of U_N ... U_1 around eps0 to the given order (inclusive), at
/// zero detuning.
inline MatrixSeries sequence_series(std::span<const Pulse> pulses, double eps0, std::size_t order) {
    if (pulses.empty()) {
        throw std::invalid_argument("sequence_series: empty pulse list");
    }
    MatrixSeries total(order + 1);
    for (const auto &p : pulses) {
        total = pulse_series(p, eps0, order + 1) * total;
    }
    return total;
}

/// Taylor coefficients of |s(x)|^2 given those of s(x).
inline std::vector<double> modulus_squared_series(const Series &s) {
    std::vector<double> out(s.size(), 0.0);
    for (std::size_t i = 0; i < s.size(); ++i) {
        for (std::size_t j = 0; i + j < s.size(); ++j) {
            out[i + j] += (s[i] * std::conj(s[j])).real();
        }
    }
    return out;
}

}  // namespace cpulse
