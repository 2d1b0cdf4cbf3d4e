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

// Published composite phases, in units of pi. Theta rows hold phi_2..phi_N
// (phi_1 = 0 is implied) and are indexed by target probability 0.1 ... 0.9.

#include <array>
#include <span>
#include <string_view>
#include <vector>

namespace cpulse::tables {

inline constexpr std::array<double, 9> kThetaTargets{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};

struct UniversalRow {
    std::string_view label;
    double denominator;
    std::vector<double> numerators;
};

inline const std::vector<UniversalRow> &universal_rows() {
    static const std::vector<UniversalRow> rows{
        {"U3", 2, {0, 1, 0}},
        {"U5a", 6, {0, 5, 2, 5, 0}},
        {"U5b", 6, {0, 11, 2, 11, 0}},
        {"U7a", 12, {0, 11, 10, 17, 10, 11, 0}},
        {"U7b", 12, {0, 1, 14, 19, 14, 1, 0}},
        {"U9a", 1, {0, 0.366, 0.638, 0.435, 1.697, 0.435, 0.638, 0.366, 0}},
        {"U9b", 1, {0, 0.634, 1.362, 0.565, 0.303, 0.565, 1.362, 0.634, 0}},
        {"U11a", 12, {0, 11, 10, 23, 1, 19, 1, 23, 10, 11, 0}},
        {"U11b", 12, {0, 1, 14, 13, 23, 17, 23, 13, 14, 1, 0}},
        {"U13a", 24, {0, 9, 42, 11, 8, 37, 2, 37, 8, 11, 42, 9, 0}},
        {"U13b", 24, {0, 33, 42, 35, 8, 13, 2, 13, 8, 35, 42, 33, 0}},
        {"U25a", 6, {0, 5, 2, 5, 0, 11, 4, 1, 4, 11, 2, 7, 4, 7, 2, 11, 4, 1, 4, 11, 0, 5, 2, 5, 0}},
        {"U25b", 6, {0, 11, 2, 11, 0, 5, 4, 7, 4, 5, 2, 1, 4, 1, 2, 5, 4, 7, 4, 5, 0, 11, 2, 11, 0}},
    };
    return rows;
}

using ThetaRows = std::array<std::vector<double>, 9>;

struct ThetaColumn {
    int n_pulses;
    ThetaRows rows;
};

/// Broadband theta pulses A B...B A, lengths 2..6.
inline const std::vector<ThetaColumn> &theta_bb_columns() {
    static const std::vector<ThetaColumn> cols{
        {2,
         {{{0.7952}, {0.7048}, {0.6310}, {0.5641}, {0.5}, {0.4359}, {0.3690}, {0.2952}, {0.2048}}}},
        {3,
         {{{0.8204, 1.4359},
           {0.7952, 1.2952},
           {0.7778, 1.1866},
           {0.7634, 1.0908},
           {3.0 / 4, 1},
           {0.7366, 0.9092},
           {0.7222, 0.8134},
           {0.7048, 0.7048},
           {0.6796, 0.5641}}}},
        {4,
         {{{2.0 / 3, 1.4618, 0.7952},
           {2.0 / 3, 1.3715, 0.7048},
           {2.0 / 3, 1.2977, 0.6310},
           {2.0 / 3, 1.2308, 0.5641},
           {2.0 / 3, 7.0 / 6, 1.0 / 2},
           {2.0 / 3, 1.1026, 0.4359},
           {2.0 / 3, 1.0357, 0.3690},
           {2.0 / 3, 0.9618, 0.2952},
           {2.0 / 3, 0.8715, 0.2048}}}},
        {5,
         {{{0.5033, 1.6110, 1.1032, 1.7861},
           {0.4569, 1.5710, 1.185, 1.8467},
           {0.4253, 1.5436, 1.2531, 1.9006},
           {0.3991, 1.5209, 1.3153, 1.9510},
           {3.0 / 8, 3.0 / 2, 11.0 / 8, 0},
           {0.3509, 1.4791, 1.4347, 0.0490},
           {0.3247, 1.4564, 1.4969, 0.0994},
           {0.2931, 1.4291, 1.565, 0.1533},
           {0.2467, 1.3890, 1.6468, 0.2139}}}},
        {6,
         {{{2.0 / 5, 8.0 / 5, 0.3952, 1.1952, 0.7952},
           {2.0 / 5, 8.0 / 5, 0.3048, 1.1048, 0.7048},
           {2.0 / 5, 8.0 / 5, 0.2310, 1.0310, 0.6310},
           {2.0 / 5, 8.0 / 5, 0.1641, 0.9641, 0.5641},
           {2.0 / 5, 8.0 / 5, 1.0 / 10, 9.0 / 10, 1.0 / 2},
           {2.0 / 5, 8.0 / 5, 0.0359, 0.8359, 0.4359},
           {2.0 / 5, 8.0 / 5, 1.9689, 0.7689, 0.3689},
           {2.0 / 5, 8.0 / 5, 1.8952, 0.6952, 0.2952},
           {2.0 / 5, 8.0 / 5, 1.8048, 0.6048, 0.2048}}}},
    };
    return cols;
}

/// Narrowband theta pulses A B...B A, lengths 2, 4, 6, 8.
inline const std::vector<ThetaColumn> &theta_nb_columns() {
    static const std::vector<ThetaColumn> cols{
        {2,
         {{{0.7952}, {0.7048}, {0.6310}, {0.5641}, {0.5}, {0.4359}, {0.3690}, {0.2952}, {0.2048}}}},
        {4,
         {{{0.0769, 1.0257, 1.1026},
           {0.1108, 1.0373, 1.1481},
           {0.1386, 1.0469, 1.1855},
           {0.1639, 1.0557, 1.2196},
           {0.1881, 1.0644, 1.2525},
           {0.2124, 1.0732, 1.2857},
           {0.2379, 1.0827, 1.3207},
           {0.2661, 1.0936, 1.3597},
           {0.3009, 1.1075, 1.4083}}}},
        {6,
         {{{1.4150, 0.5716, 0.8499, 0.0064, 1.4214},
           {1.4316, 0.6075, 0.8012, 1.9772, 1.4087},
           {1.4379, 0.6284, 0.7646, 1.9551, 1.3930},
           {1.4400, 0.6430, 0.7330, 1.9360, 1.3760},
           {1.4396, 0.6541, 0.7038, 1.9182, 1.3579},
           {1.4374, 0.6629, 0.6752, 1.9008, 1.3382},
           {1.4334, 0.6702, 0.6460, 1.8828, 1.3162},
           {1.4274, 0.6763, 0.6142, 1.8630, 1.2904},
           {1.4183, 0.6813, 0.5755, 1.8385, 1.2568}}}},
        {8,
         {{{1.2681, 0.5191, 0.4643, 1.5937, 1.5389, 0.7899, 0.0580},
           {1.2813, 0.5427, 0.4539, 1.6112, 1.5223, 0.7838, 0.0651},
           {1.2879, 0.5569, 0.4423, 1.6198, 1.5052, 0.7742, 0.0621},
           {1.2917, 0.5672, 0.4302, 1.6248, 1.4879, 0.7633, 0.0551},
           {1.2939, 0.5752, 0.4177, 1.6277, 1.4702, 0.7515, 0.0454},
           {1.2948, 0.5818, 0.4043, 1.6291, 1.4516, 0.7386, 0.0334},
           {1.2947, 0.5874, 0.3896, 1.6291, 1.4314, 0.7241, 0.0187},
           {1.2934, 0.5922, 0.3727, 1.6277, 1.4081, 0.7069, 0.0003},
           {1.2906, 0.5965, 0.3508, 1.6240, 1.3784, 0.6843, 1.9749}}}},
    };
    return cols;
}

/// Twinning offsets printed alongside the passband theta table (units of pi).
inline constexpr std::array<double, 9> kTwinningOffsetsPrinted{0.7952, 0.7048, 0.6310, 0.5641, 0.5,
                                                               0.4359, 0.3690, 0.2952, 0.2048};

}  // namespace cpulse::tables
