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
#include <utility>

#include "qwalk/observables.hpp"
#include "qwalk/preparations.hpp"

namespace qwalk {

inline constexpr double kDefaultTolerance = 1e-9;

// p(a, b | i, j) for a, b in {+1, -1} and settings i, j in {0, 1}. Entries are
// raw reconstructed values and may be negative for extended preparations.
class JointTable {
 public:
  double tol = kDefaultTolerance;

  double& at(int a, int b, int i, int j) { return p_[index(a, b, i, j)]; }
  double at(int a, int b, int i, int j) const { return p_[index(a, b, i, j)]; }

  const std::array<double, 16>& entries() const { return p_; }
  std::array<double, 16>& entries() { return p_; }

  double correlator(int i, int j) const {
    return at(1, 1, i, j) + at(-1, -1, i, j) - at(1, -1, i, j) - at(-1, 1, i, j);
  }
  double chsh() const { return correlator(0, 0) + correlator(0, 1) + correlator(1, 0) - correlator(1, 1); }
  double min_entry() const;
  double setting_sum(int i, int j) const;
  double alice_marginal(int a, int i, int j) const { return at(a, 1, i, j) + at(a, -1, i, j); }
  double bob_marginal(int b, int i, int j) const { return at(1, b, i, j) + at(-1, b, i, j); }

  static constexpr std::size_t index(int a, int b, int i, int j) {
    return static_cast<std::size_t>(((a == 1 ? 0 : 1) * 2 + (b == 1 ? 0 : 1)) * 4 + i * 2 + j);
  }

 private:
  std::array<double, 16> p_{};
};

// w+ T+ + w- T- entrywise.
JointTable combine_tables(double w_plus, const JointTable& plus, double w_minus, const JointTable& minus);

struct BellReport {
  std::array<std::array<double, 2>, 2> E{};  // E[i][j]
  double S = 0.0;
  double min_p = 0.0;
  double ns_deviation = 0.0;
  double normalization_error = 0.0;
  bool admissible = false;
  bool no_signaling = false;

  bool accepted() const { return admissible && no_signaling; }
};

struct Admissibility {
  bool admissible = false;
  double min_p = 0.0;
};

struct NoSignaling {
  bool no_signaling = false;
  double max_deviation = 0.0;
};

DiagonalBinning sign_binning(int t_max, int sign_of_zero = +1);
DiagonalBinning threshold_binning(int t_max, int x0);

double correlator(const EvolvedEnsemble& ensemble, const WalkerObservable& b, const CoinObservable& a);

JointTable joint_table(const EvolvedEnsemble& ensemble, const CoinObservable& a0, const CoinObservable& a1,
                       const WalkerObservable& b0, const WalkerObservable& b1, double tol = kDefaultTolerance);

Admissibility check_admissible(const JointTable& t);
NoSignaling check_no_signaling(const JointTable& t);
BellReport make_report(const JointTable& t);

struct WitnessEvaluation {
  BellReport report;
  JointTable table;
  EvolvedEnsemble ensemble;
};

WitnessEvaluation evaluate_witness(const BlochVector& prep, const std::pair<Vec3, Vec3>& coin_dirs,
                                   const std::pair<WalkerObservable, WalkerObservable>& walker_obs, int steps,
                                   double tol = kDefaultTolerance);

// Precomputed response of a fixed pair of walker observables at a fixed walk
// time. The walk is linear, so the conditional coin operator of any initial
// coin |c> = c0|0> + c1|1> is sum_{k,l} c_k conj(c_l) K[j][b][k][l], where the
// K blocks come from the two basis walks. Tables of a pure branch then cost
// O(1) instead of a walk.
class ResponseKernel {
 public:
  ResponseKernel(int steps, const WalkerObservable& b0, const WalkerObservable& b1);

  int steps() const { return steps_; }
  Matrix2c conditional_coin_operator(const CoinVector& coin, int j, int outcome) const;
  JointTable branch_table(const CoinVector& coin, const CoinObservable& a0, const CoinObservable& a1) const;
  JointTable table(const SignedEnsemble& ensemble, const CoinObservable& a0, const CoinObservable& a1,
                   double tol = kDefaultTolerance) const;

 private:
  int steps_;
  // blocks_[j][b][k][l], b index 0 <-> +1
  std::array<std::array<std::array<std::array<Matrix2c, 2>, 2>, 2>, 2> blocks_;
};

}  // namespace qwalk
