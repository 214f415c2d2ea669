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

#include "qwalk/emulation.hpp"

#include <algorithm>
#include <cmath>

#include "qwalk/errors.hpp"
#include "qwalk/rng.hpp"

namespace qwalk {

namespace {

constexpr int kOutcomes[2] = {+1, -1};

void check_table(const JointTable& t, const char* name) {
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      if (std::abs(t.setting_sum(i, j) - 1.0) > 1e-9)
        throw DomainError(std::string("emulate_shots: ") + name + " table is not normalized");
}

// Empirical frequencies of the four (a, b) outcomes at one setting pair.
std::array<double, 4> sample_frequencies(const JointTable& exact, int i, int j, long long shots, Rng& rng) {
  std::array<double, 4> cdf{};
  double acc = 0.0;
  for (int ai = 0; ai < 2; ++ai)
    for (int bi = 0; bi < 2; ++bi) {
      acc += std::max(0.0, exact.at(kOutcomes[ai], kOutcomes[bi], i, j));
      cdf[static_cast<std::size_t>(ai * 2 + bi)] = acc;
    }
  std::array<long long, 4> counts{};
  for (long long s = 0; s < shots; ++s) {
    const double u = rng.uniform() * acc;
    std::size_t k = 0;
    while (k < 3 && u >= cdf[k]) ++k;
    ++counts[k];
  }
  std::array<double, 4> freq{};
  for (std::size_t k = 0; k < 4; ++k) freq[k] = static_cast<double>(counts[k]) / static_cast<double>(shots);
  return freq;
}

}  // namespace

BranchShots allocate_shots(std::pair<double, double> weights, long long total_shots) {
  if (total_shots < 1) throw DomainError("allocate_shots: budget must be at least 1");
  const double l1 = std::abs(weights.first) + std::abs(weights.second);
  if (!(l1 > 0.0)) throw DomainError("allocate_shots: weights vanish");
  if (weights.second == 0.0) return {total_shots, 0};
  if (weights.first == 0.0) return {0, total_shots};
  long long plus = std::llround(static_cast<double>(total_shots) * std::abs(weights.first) / l1);
  plus = std::clamp(plus, 1LL, total_shots - 1);
  return {plus, total_shots - plus};
}

EmulationResult emulate_shots(const JointTable& exact_plus, const JointTable& exact_minus,
                              std::pair<double, double> weights, BranchShots shots, std::uint64_t seed) {
  if (std::abs(weights.first + weights.second - 1.0) > 1e-12)
    throw DomainError("emulate_shots: weights do not sum to 1");
  if (shots.plus < 0 || shots.minus < 0 || shots.plus + shots.minus == 0)
    throw DomainError("emulate_shots: zero shots");
  if ((weights.first != 0.0 && shots.plus == 0) || (weights.second != 0.0 && shots.minus == 0))
    throw DomainError("emulate_shots: a branch with nonzero weight has no shots");
  check_table(exact_plus, "plus");
  check_table(exact_minus, "minus");

  EmulationResult out;
  out.shots = shots;
  out.table.tol = exact_plus.tol;
  const JointTable* exact[2] = {&exact_plus, &exact_minus};
  const double w[2] = {weights.first, weights.second};
  const long long n[2] = {shots.plus, shots.minus};

  std::array<double, 16> variance{};
  double s_variance = 0.0;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      const double sign = (i == 1 && j == 1) ? -1.0 : 1.0;
      for (int k = 0; k < 2; ++k) {
        if (n[k] == 0) continue;
        Rng rng = Rng::stream(seed, {static_cast<std::uint64_t>(k), static_cast<std::uint64_t>(i),
                                     static_cast<std::uint64_t>(j)});
        const auto freq = sample_frequencies(*exact[k], i, j, n[k], rng);
        double e_hat = 0.0;
        for (int ai = 0; ai < 2; ++ai)
          for (int bi = 0; bi < 2; ++bi) {
            const double f = freq[static_cast<std::size_t>(ai * 2 + bi)];
            const std::size_t idx = JointTable::index(kOutcomes[ai], kOutcomes[bi], i, j);
            out.table.entries()[idx] += w[k] * f;
            variance[idx] += w[k] * w[k] * f * (1.0 - f) / static_cast<double>(n[k]);
            e_hat += kOutcomes[ai] * kOutcomes[bi] * f;
          }
        s_variance += sign * sign * w[k] * w[k] * (1.0 - e_hat * e_hat) / static_cast<double>(n[k]);
      }
    }
  for (std::size_t idx = 0; idx < 16; ++idx) out.std_error[idx] = std::sqrt(variance[idx]);
  out.S = out.table.chsh();
  out.S_std_error = std::sqrt(s_variance);
  return out;
}

EmulationResult emulate_shots(const JointTable& exact_plus, const JointTable& exact_minus,
                              std::pair<double, double> weights, long long n_shots_per_branch, std::uint64_t seed) {
  if (n_shots_per_branch < 1) throw DomainError("emulate_shots: zero shots");
  return emulate_shots(exact_plus, exact_minus, weights, BranchShots{n_shots_per_branch, n_shots_per_branch}, seed);
}

std::vector<ShotNoisePoint> shot_noise_study(const JointTable& exact_plus, const JointTable& exact_minus,
                                             std::pair<double, double> weights,
                                             const std::vector<long long>& budgets, int repetitions,
                                             std::uint64_t seed) {
  if (repetitions < 2) throw DomainError("shot_noise_study: need at least two repetitions");
  const double cost = std::abs(weights.first) + std::abs(weights.second);
  std::vector<ShotNoisePoint> out;
  out.reserve(budgets.size());
  for (std::size_t g = 0; g < budgets.size(); ++g) {
    const BranchShots shots = allocate_shots(weights, budgets[g]);
    std::vector<double> values(static_cast<std::size_t>(repetitions));
    for (int m = 0; m < repetitions; ++m) {
      const std::uint64_t rep_seed = Rng::stream(seed, {g, static_cast<std::uint64_t>(m)}).next();
      values[static_cast<std::size_t>(m)] = emulate_shots(exact_plus, exact_minus, weights, shots, rep_seed).S;
    }
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= repetitions;
    double var = 0.0;
    for (double v : values) var += (v - mean) * (v - mean);
    var /= (repetitions - 1);
    out.push_back({budgets[g], mean, var, cost * cost / static_cast<double>(budgets[g])});
  }
  return out;
}

double log_log_slope(const std::vector<ShotNoisePoint>& points) {
  if (points.size() < 2) throw DomainError("log_log_slope: need at least two points");
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  const double n = static_cast<double>(points.size());
  for (const auto& p : points) {
    const double x = std::log(static_cast<double>(p.total_shots));
    const double y = std::log(p.variance_S);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace qwalk
