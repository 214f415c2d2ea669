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

#include "qwalk/bell.hpp"

#include <algorithm>
#include <cmath>

#include "qwalk/errors.hpp"

namespace qwalk {

namespace {

constexpr int kOutcomes[2] = {+1, -1};

void check_shared_steps(const EvolvedEnsemble& ensemble) {
  if (ensemble.empty()) throw ShapeError("empty ensemble");
  const int t = ensemble.front().state.steps_taken();
  const int window = ensemble.front().state.t_max();
  for (const auto& b : ensemble)
    if (b.state.steps_taken() != t || b.state.t_max() != window)
      throw ShapeError("ensemble branches do not share the walk time");
}

// Accumulate w * Re Tr[Pi_a G_b] for the four (a, b) outcomes of one setting pair.
void accumulate(JointTable& t, double w, const std::array<Matrix2c, 2>& conditional, const CoinObservable& a_obs,
                int i, int j) {
  for (int ai = 0; ai < 2; ++ai) {
    const Matrix2c proj = a_obs.projector(kOutcomes[ai]);
    for (int bi = 0; bi < 2; ++bi)
      t.at(kOutcomes[ai], kOutcomes[bi], i, j) += w * (proj * conditional[bi]).trace().real();
  }
}

}  // namespace

double JointTable::min_entry() const { return *std::min_element(p_.begin(), p_.end()); }

double JointTable::setting_sum(int i, int j) const {
  double s = 0.0;
  for (int a : kOutcomes)
    for (int b : kOutcomes) s += at(a, b, i, j);
  return s;
}

JointTable combine_tables(double w_plus, const JointTable& plus, double w_minus, const JointTable& minus) {
  JointTable out;
  out.tol = plus.tol;
  for (std::size_t k = 0; k < 16; ++k) out.entries()[k] = w_plus * plus.entries()[k] + w_minus * minus.entries()[k];
  return out;
}

DiagonalBinning sign_binning(int t_max, int sign_of_zero) {
  if (t_max < 0) throw DomainError("sign_binning: negative window");
  if (sign_of_zero != 1 && sign_of_zero != -1) throw DomainError("sign_binning: sign_of_zero must be +1 or -1");
  DiagonalBinning out{t_max, {}};
  out.labels.reserve(static_cast<std::size_t>(2 * t_max + 1));
  for (int x = -t_max; x <= t_max; ++x) out.labels.push_back(x > 0 ? 1 : (x < 0 ? -1 : sign_of_zero));
  return out;
}

DiagonalBinning threshold_binning(int t_max, int x0) {
  if (t_max < 0) throw DomainError("threshold_binning: negative window");
  if (x0 < 0 || x0 > t_max + 1) throw DomainError("threshold_binning: x0 outside [0, T+1]");
  DiagonalBinning out{t_max, {}};
  out.labels.reserve(static_cast<std::size_t>(2 * t_max + 1));
  for (int x = -t_max; x <= t_max; ++x) out.labels.push_back(std::abs(x) >= x0 ? 1 : -1);
  return out;
}

double correlator(const EvolvedEnsemble& ensemble, const WalkerObservable& b, const CoinObservable& a) {
  check_shared_steps(ensemble);
  const Matrix2c amat = a.matrix();
  double e = 0.0;
  for (const auto& branch : ensemble)
    e += branch.weight * (amat * walker_weighted_coin_operator(branch.state, b)).trace().real();
  return e;
}

JointTable joint_table(const EvolvedEnsemble& ensemble, const CoinObservable& a0, const CoinObservable& a1,
                       const WalkerObservable& b0, const WalkerObservable& b1, double tol) {
  check_shared_steps(ensemble);
  JointTable t;
  t.tol = tol;
  const CoinObservable* alice[2] = {&a0, &a1};
  const WalkerObservable* bob[2] = {&b0, &b1};
  for (const auto& branch : ensemble) {
    for (int j = 0; j < 2; ++j) {
      const std::array<Matrix2c, 2> conditional = {conditional_coin_operator(branch.state, *bob[j], +1),
                                                   conditional_coin_operator(branch.state, *bob[j], -1)};
      for (int i = 0; i < 2; ++i) accumulate(t, branch.weight, conditional, *alice[i], i, j);
    }
  }
  return t;
}

Admissibility check_admissible(const JointTable& t) {
  const double min_p = t.min_entry();
  bool ok = min_p >= -t.tol;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) ok = ok && std::abs(t.setting_sum(i, j) - 1.0) <= t.tol;
  return {ok, min_p};
}

NoSignaling check_no_signaling(const JointTable& t) {
  double dev = 0.0;
  for (int k : kOutcomes) {
    for (int i = 0; i < 2; ++i) dev = std::max(dev, std::abs(t.alice_marginal(k, i, 0) - t.alice_marginal(k, i, 1)));
    for (int j = 0; j < 2; ++j) dev = std::max(dev, std::abs(t.bob_marginal(k, 0, j) - t.bob_marginal(k, 1, j)));
  }
  return {dev <= t.tol, dev};
}

BellReport make_report(const JointTable& t) {
  BellReport r;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      r.E[i][j] = t.correlator(i, j);
      r.normalization_error = std::max(r.normalization_error, std::abs(t.setting_sum(i, j) - 1.0));
    }
  r.S = r.E[0][0] + r.E[0][1] + r.E[1][0] - r.E[1][1];
  const auto adm = check_admissible(t);
  const auto ns = check_no_signaling(t);
  r.min_p = adm.min_p;
  r.admissible = adm.admissible;
  r.ns_deviation = ns.max_deviation;
  r.no_signaling = ns.no_signaling;
  return r;
}

WitnessEvaluation evaluate_witness(const BlochVector& prep, const std::pair<Vec3, Vec3>& coin_dirs,
                                   const std::pair<WalkerObservable, WalkerObservable>& walker_obs, int steps,
                                   double tol) {
  const CoinObservable a0(coin_dirs.first);
  const CoinObservable a1(coin_dirs.second);
  WitnessEvaluation out;
  out.ensemble = evolve_ensemble(signed_decomposition(prep), steps);
  out.table = joint_table(out.ensemble, a0, a1, walker_obs.first, walker_obs.second, tol);
  out.report = make_report(out.table);
  return out;
}

ResponseKernel::ResponseKernel(int steps, const WalkerObservable& b0, const WalkerObservable& b1) : steps_(steps) {
  const std::array<WalkState, 2> basis = {walk<double>(steps, 1.0, 0.0), walk<double>(steps, 0.0, 1.0)};
  const WalkerObservable* bob[2] = {&b0, &b1};
  for (int j = 0; j < 2; ++j)
    for (int bi = 0; bi < 2; ++bi)
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l)
          blocks_[j][bi][k][l] = conditional_cross_operator(basis[k], basis[l], *bob[j], kOutcomes[bi]);
}

Matrix2c ResponseKernel::conditional_coin_operator(const CoinVector& coin, int j, int outcome) const {
  const auto& blocks = blocks_[j][outcome == 1 ? 0 : 1];
  Matrix2c g = Matrix2c::Zero();
  for (int k = 0; k < 2; ++k)
    for (int l = 0; l < 2; ++l) g += (coin(k) * std::conj(coin(l))) * blocks[k][l];
  return g;
}

JointTable ResponseKernel::branch_table(const CoinVector& coin, const CoinObservable& a0,
                                        const CoinObservable& a1) const {
  JointTable t;
  const CoinObservable* alice[2] = {&a0, &a1};
  for (int j = 0; j < 2; ++j) {
    const std::array<Matrix2c, 2> conditional = {conditional_coin_operator(coin, j, +1),
                                                 conditional_coin_operator(coin, j, -1)};
    for (int i = 0; i < 2; ++i) accumulate(t, 1.0, conditional, *alice[i], i, j);
  }
  return t;
}

JointTable ResponseKernel::table(const SignedEnsemble& ensemble, const CoinObservable& a0, const CoinObservable& a1,
                                 double tol) const {
  JointTable t;
  t.tol = tol;
  for (const auto& m : ensemble.members) {
    const JointTable branch = branch_table(m.coin, a0, a1);
    for (std::size_t k = 0; k < 16; ++k) t.entries()[k] += m.weight * branch.entries()[k];
  }
  return t;
}

}  // namespace qwalk
