// SPDX-License-Identifier: Apache-2.0
//
// qwalk: coined quantum walk Bell-test toolkit
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include <array>
#include <cstdint>
#include <utility>
#include <vector>

#include "qwalk/bell.hpp"

namespace qwalk {

struct BranchShots {
  long long plus = 0;
  long long minus = 0;
};

// Splits a total budget between the branches in proportion to |w_k|; a zero
// weight gets no shots. Rounds the plus share and gives the rest to minus.
BranchShots allocate_shots(std::pair<double, double> weights, long long total_shots);

struct EmulationResult {
  JointTable table;                   // w+ p^+ + w- p^-
  std::array<double, 16> std_error{};  // per-entry standard error
  double S = 0.0;
  double S_std_error = 0.0;
  BranchShots shots;
};

// Draws multinomial outcome counts for every setting pair from the two exact
// physical branch tables and recombines the empirical frequencies with the
// signed weights. Branch k at setting pair (i, j) uses stream (seed, k, i, j).
EmulationResult emulate_shots(const JointTable& exact_plus, const JointTable& exact_minus,
                              std::pair<double, double> weights, BranchShots shots, std::uint64_t seed);

EmulationResult emulate_shots(const JointTable& exact_plus, const JointTable& exact_minus,
                              std::pair<double, double> weights, long long n_shots_per_branch, std::uint64_t seed);

struct ShotNoisePoint {
  long long total_shots = 0;
  double mean_S = 0.0;
  double variance_S = 0.0;  // empirical, over repetitions
  double nominal = 0.0;     // N^2 / total_shots
};

// Repeats the |w|-proportional emulation `repetitions` times per budget.
// Repetition m at budget index g uses seed stream (seed, g, m).
std::vector<ShotNoisePoint> shot_noise_study(const JointTable& exact_plus, const JointTable& exact_minus,
                                             std::pair<double, double> weights,
                                             const std::vector<long long>& budgets, int repetitions,
                                             std::uint64_t seed);

// Least-squares slope of log(variance) against log(shots).
double log_log_slope(const std::vector<ShotNoisePoint>& points);

}  // namespace qwalk
