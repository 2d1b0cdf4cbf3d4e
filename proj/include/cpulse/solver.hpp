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

/// Composite phases from derivative cancellation.
///
/// A problem fixes the pulse template, its length, the target probability
/// and where the error expansion is taken. The residual vector always starts
/// with p(eps = 0) - target, followed by one group per cancelled order:
///
///  * ZeroError, target < 1: Taylor coefficients of p(eps) at eps = 0 of
///    orders 2, 4, ... (odd orders vanish identically for these templates).
///  * ZeroError, target = 1: Re and Im of the Taylor coefficients of the
///    survival amplitude a11 at eps = 0, orders 1, 2, ...
///  * ZeroField: Re and Im of the Taylor coefficients of the transition
///    amplitude a21 at eps = -1, orders 1, 3, 5, ... (a21 is odd there).
///
/// The first phase is gauge-fixed to 0. Solutions are compared by their
/// excitation profiles, since phases are only defined up to global shifts
/// and sign flips.

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "json.hpp"

#include "cpulse/parallel.hpp"
#include "cpulse/sequences.hpp"
#include "cpulse/series.hpp"
#include "cpulse/su2.hpp"

namespace cpulse {

enum class PulseTemplate { PiOnly, Theta };
enum class ExpansionPoint { ZeroError, ZeroField };

inline constexpr std::string_view template_name(PulseTemplate t) {
    return t == PulseTemplate::PiOnly ? "pi" : "theta";
}

inline constexpr std::string_view expansion_name(ExpansionPoint e) {
    return e == ExpansionPoint::ZeroError ? "zero-error" : "zero-field";
}

/// Pulses of the template with the given phases (units of pi, first included).
inline std::vector<Pulse> template_pulses(PulseTemplate t, std::span<const double> phases_pi) {
    if (phases_pi.empty()) {
        throw std::invalid_argument("template needs at least one phase");
    }
    return t == PulseTemplate::PiOnly ? detail::pi_pulses(phases_pi) : detail::theta_pulses(phases_pi);
}

struct SolveProblem {
    PulseTemplate pulse_template = PulseTemplate::Theta;
    int n_pulses = 2;
    double target_p = 0.5;
    ExpansionPoint expansion = ExpansionPoint::ZeroError;
    int n_conditions = 1;  ///< target row plus cancelled orders

    int free_phases() const { return n_pulses - 1; }

    bool full_transfer() const { return std::abs(target_p - 1.0) < 1e-12; }

    void validate() const {
        if (n_pulses < 2) {
            throw std::invalid_argument("solve: need at least two pulses");
        }
        if (!(target_p > 0.0 && target_p <= 1.0)) {
            throw std::invalid_argument("solve: target probability must lie in (0, 1]");
        }
        // For pi-only templates with full transfer the target row holds
        // identically, hence the bound is n_pulses rather than n_pulses - 1.
        if (n_conditions < 1 || n_conditions > n_pulses) {
            throw std::invalid_argument("solve: condition count must lie in [1, n_pulses]");
        }
    }
};

/// Residual vector for the free phases phi_2..phi_N (units of pi).
inline std::vector<double> objective(const SolveProblem &problem, std::span<const double> free_phases_pi) {
    problem.validate();
    if (static_cast<int>(free_phases_pi.size()) != problem.free_phases()) {
        throw std::invalid_argument("objective: expected " + std::to_string(problem.free_phases()) + " free phases");
    }
    std::vector<double> phases{0.0};
    phases.insert(phases.end(), free_phases_pi.begin(), free_phases_pi.end());
    auto pulses = template_pulses(problem.pulse_template, phases);
    std::size_t orders = static_cast<std::size_t>(problem.n_conditions - 1);

    std::vector<double> r;
    double p0 = std::norm(sequence_propagator(pulses, {0.0, 0.0}).a21);
    r.push_back(p0 - problem.target_p);
    if (orders == 0) {
        return r;
    }
    if (problem.expansion == ExpansionPoint::ZeroError) {
        if (problem.full_transfer()) {
            auto s = sequence_series(pulses, 0.0, orders);
            for (std::size_t k = 1; k <= orders; ++k) {
                r.push_back(s.a11[k].real());
                r.push_back(s.a11[k].imag());
            }
        } else {
            auto s = sequence_series(pulses, 0.0, 2 * orders);
            auto p = modulus_squared_series(s.a21);
            for (std::size_t k = 1; k <= orders; ++k) {
                r.push_back(p[2 * k]);
            }
        }
    } else {
        auto s = sequence_series(pulses, -1.0, 2 * orders - 1);
        for (std::size_t k = 1; k <= orders; ++k) {
            r.push_back(s.a21[2 * k - 1].real());
            r.push_back(s.a21[2 * k - 1].imag());
        }
    }
    return r;
}

inline double residual_norm(const std::vector<double> &r) {
    double s = 0;
    for (double v : r) {
        s += v * v;
    }
    return std::sqrt(s);
}

struct SolveOptions {
    int restarts = 64;
    std::uint64_t seed = 1;
    int max_iterations = 400;
    double tolerance = 1e-8;  ///< residual norm counted as converged
    unsigned threads = 0;     ///< 0: scan_thread_count()
};

struct SolveResult {
    std::vector<double> phases_pi;  ///< all N phases, first is 0, each in [0, 2)
    double residual_norm = std::numeric_limits<double>::infinity();
    int iterations = 0;
    bool converged = false;
    int start_index = -1;
};

/// Damped Gauss-Newton (Levenberg-Marquardt) from one starting point.
inline SolveResult polish(const SolveProblem &problem, std::vector<double> x, const SolveOptions &opt = {}) {
    problem.validate();
    const int n = problem.free_phases();
    if (static_cast<int>(x.size()) != n) {
        throw std::invalid_argument("polish: wrong number of free phases");
    }
    auto eval = [&](const std::vector<double> &v) { return objective(problem, v); };
    auto r = eval(x);
    double norm = residual_norm(r);
    double lambda = 1e-3;
    constexpr double kJacobianStep = 1e-6;
    int it = 0;
    for (; it < opt.max_iterations && norm > 1e-14; ++it) {
        const int m = static_cast<int>(r.size());
        Eigen::MatrixXd jac(m, n);
        for (int j = 0; j < n; ++j) {
            auto up = x;
            auto down = x;
            up[j] += kJacobianStep;
            down[j] -= kJacobianStep;
            auto ru = eval(up);
            auto rd = eval(down);
            for (int i = 0; i < m; ++i) {
                jac(i, j) = (ru[i] - rd[i]) / (2 * kJacobianStep);
            }
        }
        Eigen::VectorXd res = Eigen::Map<const Eigen::VectorXd>(r.data(), m);
        Eigen::MatrixXd normal = jac.transpose() * jac;
        Eigen::VectorXd grad = jac.transpose() * res;
        bool accepted = false;
        double step_size = 0;
        for (int attempt = 0; attempt < 30; ++attempt) {
            Eigen::MatrixXd damped = normal;
            for (int j = 0; j < n; ++j) {
                damped(j, j) += lambda * (normal(j, j) + 1e-9);
            }
            Eigen::VectorXd dx = damped.ldlt().solve(-grad);
            std::vector<double> trial = x;
            for (int j = 0; j < n; ++j) {
                trial[j] += dx[j];
            }
            auto rt = eval(trial);
            double nt = residual_norm(rt);
            if (std::isfinite(nt) && nt < norm) {
                x = std::move(trial);
                r = std::move(rt);
                norm = nt;
                step_size = dx.norm();
                lambda = std::max(lambda / 3, 1e-12);
                accepted = true;
                break;
            }
            lambda *= 4;
        }
        if (!accepted || step_size < 1e-15) {
            break;
        }
    }
    SolveResult out;
    out.phases_pi.push_back(0.0);
    for (double v : x) {
        out.phases_pi.push_back(wrap_phase_pi(v));
    }
    out.residual_norm = norm;
    out.iterations = it;
    out.converged = norm < opt.tolerance;
    return out;
}

/// Multi-start search. Start i draws its phases uniformly from [0, 2) with a
/// generator seeded by (seed, i); the lowest residual wins, ties going to the
/// lower start index. Non-convergence is reported, not thrown.
inline SolveResult solve(const SolveProblem &problem, const SolveOptions &opt = {}) {
    problem.validate();
    if (opt.restarts < 1) {
        throw std::invalid_argument("solve: need at least one start");
    }
    std::vector<SolveResult> runs(static_cast<std::size_t>(opt.restarts));
    unsigned threads = opt.threads == 0 ? scan_thread_count() : opt.threads;
    parallel_for(runs.size(), threads, [&](std::size_t i) {
        std::seed_seq seq{static_cast<std::uint32_t>(opt.seed), static_cast<std::uint32_t>(opt.seed >> 32),
                          static_cast<std::uint32_t>(i)};
        std::mt19937_64 rng(seq);
        std::uniform_real_distribution<double> uni(0.0, 2.0);
        std::vector<double> x(static_cast<std::size_t>(problem.free_phases()));
        for (auto &v : x) {
            v = uni(rng);
        }
        runs[i] = polish(problem, std::move(x), opt);
        runs[i].start_index = static_cast<int>(i);
    });
    std::size_t best = 0;
    for (std::size_t i = 1; i < runs.size(); ++i) {
        if (runs[i].residual_norm < runs[best].residual_norm) {
            best = i;
        }
    }
    return runs[best];
}

/// Condition counts satisfied by the published theta rows (discovered by
/// polishing every row): BB rows of length N cancel N - 2 even orders of p
/// at zero error, NB rows of length N cancel N/2 - 1 odd orders of a21 at
/// zero field.
inline SolveProblem theta_table_problem(Family family, int n_pulses, double target_p) {
    SolveProblem pr;
    pr.pulse_template = PulseTemplate::Theta;
    pr.n_pulses = n_pulses;
    pr.target_p = target_p;
    if (family == Family::ThetaBB) {
        pr.expansion = ExpansionPoint::ZeroError;
        pr.n_conditions = n_pulses - 1;
    } else if (family == Family::ThetaNB) {
        pr.expansion = ExpansionPoint::ZeroField;
        pr.n_conditions = n_pulses / 2;
    } else {
        throw std::invalid_argument("theta_table_problem: only THETA_BB and THETA_NB rows are solvable");
    }
    pr.validate();
    return pr;
}

struct ProfileDomain {
    std::vector<std::pair<double, double>> intervals{{-0.3, 0.3}};
    int samples_per_interval = 241;
    double delta = 0.0;
};

/// Largest |p_a - p_b| over the sampled domain.
inline double profile_distance(std::span<const double> phases_a, std::span<const double> phases_b,
                               PulseTemplate t, const ProfileDomain &domain) {
    if (phases_a.size() != phases_b.size()) {
        throw std::invalid_argument("profile_distance: phase lists differ in length");
    }
    if (domain.samples_per_interval < 2) {
        throw std::invalid_argument("profile_distance: need at least two samples per interval");
    }
    auto pa = template_pulses(t, phases_a);
    auto pb = template_pulses(t, phases_b);
    double worst = 0.0;
    for (auto [lo, hi] : domain.intervals) {
        for (int i = 0; i < domain.samples_per_interval; ++i) {
            double eps = lo + (hi - lo) * i / (domain.samples_per_interval - 1);
            ErrorPoint e{eps, domain.delta};
            double d = std::abs(transition_probability(sequence_propagator(pa, e)) -
                                transition_probability(sequence_propagator(pb, e)));
            worst = std::max(worst, d);
        }
    }
    return worst;
}

inline bool profile_equivalent(std::span<const double> phases_a, std::span<const double> phases_b, PulseTemplate t,
                               const ProfileDomain &domain, double tol) {
    return profile_distance(phases_a, phases_b, t, domain) <= tol;
}

inline nlohmann::json solve_report_json(const SolveProblem &problem, const SolveOptions &opt,
                                        const SolveResult &result) {
    return {{"problem",
             {{"template", std::string(template_name(problem.pulse_template))},
              {"n_pulses", problem.n_pulses},
              {"target_p", problem.target_p},
              {"expansion_point", std::string(expansion_name(problem.expansion))},
              {"n_conditions", problem.n_conditions}}},
            {"phases_pi_units", result.phases_pi},
            {"residual_norm", result.residual_norm},
            {"iterations", result.iterations},
            {"converged", result.converged},
            {"start_index", result.start_index},
            {"restarts", opt.restarts},
            {"seed", opt.seed}};
}

}  // namespace cpulse
