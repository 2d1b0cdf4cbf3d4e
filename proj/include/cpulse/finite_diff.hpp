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

#include <cmath>
#include <concepts>
#include <stdexcept>

namespace cpulse::finite_diff {

template <typename F>
concept ScalarFunction = requires(F f, double x) {
    { f(x) } -> std::convertible_to<double>;
};

/// n-th derivative by the central binomial stencil, truncation error O(h^2).
///   sum_j (-1)^j C(n, j) f(x + (n/2 - j) h) / h^n
template <ScalarFunction F>
double central(F &&f, double x, int order, double h) {
    if (order < 0) {
        throw std::invalid_argument("derivative order must be >= 0");
    }
    if (!(h > 0)) {
        throw std::invalid_argument("step must be positive");
    }
    double sum = 0.0;
    double binom = 1.0;
    for (int j = 0; j <= order; ++j) {
        double offset = (0.5 * order - j) * h;
        sum += ((j % 2 == 0) ? binom : -binom) * f(x + offset);
        binom = binom * (order - j) / (j + 1);
    }
    return sum / std::pow(h, order);
}

/// One Richardson step over two central differences with steps h and h/r:
/// cancels the h^2 term.
template <ScalarFunction F>
double richardson(F &&f, double x, int order, double h_coarse, double h_fine) {
    double coarse = central(f, x, order, h_coarse);
    double fine = central(f, x, order, h_fine);
    double r2 = (h_coarse / h_fine) * (h_coarse / h_fine);
    return (r2 * fine - coarse) / (r2 - 1.0);
}

}  // namespace cpulse::finite_diff
