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


#include "cpulse/noise.hpp"

#include <random>
#include <vector>

#include "cpulse/scan.hpp"
#include "gtest/gtest.h"

using namespace cpulse;

namespace {

double kraus_defect(const KrausPair &k) {
    Matrix2 s = k[0].adjoint() * k[0] + k[1].adjoint() * k[1];
    return std::max({std::abs(s.a11 - 1.0), std::abs(s.a12), std::abs(s.a21), std::abs(s.a22 - 1.0)});
}

std::vector<ProfileRecord> noisy_profile(const Sequence &s, const GridSpec &g) {
    ScanOptions opt;
    opt.noise = NoiseParams::defaults();
    return scan_1d(s, g, opt);
}

}  // namespace

TEST(noise, defaults) {
    auto p = NoiseParams::defaults();
    EXPECT_EQ(p.t1, 203.44e-6);
    EXPECT_EQ(p.t2, 301.91e-6);
    EXPECT_EQ(p.pulse_duration, 100e-9);
    EXPECT_EQ(p.readout_error, 0.0357);
    EXPECT_EQ(p.readout_error_1to0, p.readout_error);
    EXPECT_NO_THROW(p.validate());
}

TEST(noise, validation) {
    auto p = NoiseParams::defaults();
    p.t2 = 3 * p.t1;
    EXPECT_THROW(p.validate(), std::invalid_argument);
    p = NoiseParams::defaults();
    p.t1 = -1;
    EXPECT_THROW(p.validate(), std::invalid_argument);
    p = NoiseParams::defaults();
    p.readout_error = 0.5;
    EXPECT_THROW(p.validate(), std::invalid_argument);
    p = NoiseParams::defaults();
    p.pulse_duration = 0;
    EXPECT_THROW(p.validate(), std::invalid_argument);
    EXPECT_THROW(noisy_transition_probability(bb(3), {}, p), std::invalid_argument);
}

TEST(noise, json_round_trip) {
    auto p = NoiseParams::defaults();
    auto back = noise_params_from_json(noise_params_to_json(p));
    EXPECT_NEAR(back.t1, p.t1, 1e-18);
    EXPECT_NEAR(back.t2, p.t2, 1e-18);
    EXPECT_NEAR(back.pulse_duration, p.pulse_duration, 1e-21);
    EXPECT_EQ(back.readout_error, p.readout_error);
    auto partial = noise_params_from_json(nlohmann::json{{"readout_error", 0.01}});
    EXPECT_EQ(partial.readout_error, 0.01);
    EXPECT_EQ(partial.readout_error_1to0, 0.01);
    EXPECT_EQ(partial.t1, p.t1);
    EXPECT_THROW(noise_params_from_json(nlohmann::json{{"t1_us", 10.0}, {"t2_us", 50.0}}), std::invalid_argument);
}

TEST(noise, noiseless_limit_is_ideal) {
    auto params = NoiseParams::noiseless();
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> eps(-1.0, 1.0);
    for (const auto &s : {bb(9), nb(15), universal("U13a"), theta_nb(8, 0.3), pb_b_of_n(3, 5)}) {
        for (int k = 0; k < 25; ++k) {
            ErrorPoint e{eps(rng), eps(rng)};
            EXPECT_NEAR(noisy_transition_probability(s, e, params), sequence_probability(s, e), 1e-12) << s.label;
        }
    }
}

TEST(noise, readout_of_perfect_transfer) {
    auto p = apply_readout({1.0, false}, NoiseParams::defaults());
    EXPECT_TRUE(p.readout_applied);
    EXPECT_NEAR(p.value, 0.9643, 1e-15);
    EXPECT_NEAR(apply_readout({0.0, false}, NoiseParams::defaults()).value, 0.0357, 1e-15);
}

TEST(noise, readout_applies_once) {
    auto once = apply_readout({0.8, false}, NoiseParams::defaults());
    EXPECT_THROW(apply_readout(once, NoiseParams::defaults()), std::logic_error);
}

TEST(noise, kraus_completeness) {
    for (double g : {0.0, 1e-6, 4.9e-4, 0.1, 0.5, 1.0}) {
        EXPECT_LT(kraus_defect(amplitude_damping_kraus(g)), 1e-12) << g;
        EXPECT_LT(kraus_defect(phase_damping_kraus(g)), 1e-12) << g;
    }
}

TEST(noise, decay_closed_form) {
    // From |+>: population relaxes as exp(-t/T1), coherence as exp(-t/T2).
    NoiseParams params = NoiseParams::defaults();
    Density2 plus{{0.5, 0.5, 0.5, 0.5}};
    for (double t : {1e-7, 1e-5, 2e-4}) {
        auto s = apply_decay(plus, t, params);
        EXPECT_NEAR(s.excited_population(), 0.5 * std::exp(-t / params.t1), 1e-13);
        EXPECT_NEAR(std::abs(s.rho.a12), 0.5 * std::exp(-t / params.t2), 1e-13);
        EXPECT_TRUE(s.is_valid());
    }
}

TEST(noise, states_stay_physical) {
    NoiseParams params = NoiseParams::defaults();
    params.t1 = 2e-6;
    params.t2 = 3e-6;
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> phase(0.0, 2.0);
    std::uniform_real_distribution<double> eps(-1.0, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
        Sequence s;
        for (int k = 0; k < 30; ++k) {
            s.pulses.emplace_back(k % 2 ? 1.0 : 0.5, phase(rng));
        }
        auto rho = evolve_noisy(s, {eps(rng), eps(rng)}, params);
        EXPECT_TRUE(rho.is_valid());
        EXPECT_NEAR(rho.trace(), 1.0, 1e-12);
    }
}

TEST(noise, longer_narrowband_lowers_the_peak) {
    GridSpec g;
    g.eps_min = -0.01;
    g.eps_max = 0.01;
    g.eps_points = 41;
    double prev = 2.0;
    for (int n : {15, 75, 225, 1001}) {
        double peak = peak_probability(noisy_profile(nb(n), g), true);
        EXPECT_LT(peak, prev) << n;
        prev = peak;
    }
}

TEST(noise, long_narrowband_peak_down_wings_up) {
    GridSpec g;
    g.refine = Refinement{0.1, 401};
    auto r = noisy_profile(nb(1001), g);
    EXPECT_LT(peak_probability(r, true), peak_probability(r, false));
    EXPECT_GT(wing_level(r, 0.5, true), wing_level(r, 0.5, false));
}

TEST(noise, empty_sequence_rejected) {
    EXPECT_THROW(evolve_noisy(Sequence{}, {}, NoiseParams::defaults()), std::invalid_argument);
}
