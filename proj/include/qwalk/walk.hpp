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

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <span>
#include <utility>
#include <vector>

#include "qwalk/errors.hpp"

namespace qwalk {

// Pure state of a Hadamard walk on the window x in [-t_max, t_max].
//
// Storage is walker (x) coin: row x + t_max holds the two coin amplitudes of
// site x. Read-only after construction; step() and evolve() return new values.
template <typename Scalar>
class LatticeState {
 public:
  using Complex = std::complex<Scalar>;
  using Amplitudes = Eigen::Matrix<Complex, Eigen::Dynamic, 2>;

  LatticeState() = default;
  LatticeState(int t_max, int steps_taken, Amplitudes amplitudes)
      : t_max_(t_max), steps_taken_(steps_taken), amplitudes_(std::move(amplitudes)) {}

  int t_max() const { return t_max_; }
  int steps_taken() const { return steps_taken_; }
  Eigen::Index sites() const { return amplitudes_.rows(); }
  const Amplitudes& amplitudes() const { return amplitudes_; }

  Complex amplitude(int x, int coin) const { return amplitudes_(x + t_max_, coin); }

  Scalar norm_squared() const { return amplitudes_.squaredNorm(); }

  // Coin-by-position view (2 x (2 t_max + 1)).
  Eigen::Matrix<Complex, 2, Eigen::Dynamic> coin_matrix() const { return amplitudes_.transpose(); }

 private:
  int t_max_ = 0;
  int steps_taken_ = 0;
  Amplitudes amplitudes_;
};

using WalkState = LatticeState<double>;

template <typename Scalar>
LatticeState<Scalar> init_walker_state(int t_max, std::complex<Scalar> coin_amp0,
                                       std::complex<Scalar> coin_amp1) {
  if (t_max < 0) throw DomainError("init_walker_state: t_max must be nonnegative");
  const Scalar norm = std::norm(coin_amp0) + std::norm(coin_amp1);
  if (std::abs(norm - Scalar(1)) > Scalar(1e-12))
    throw NormalizationError("init_walker_state: coin amplitudes have squared norm " +
                             std::to_string(static_cast<double>(norm)));
  typename LatticeState<Scalar>::Amplitudes amps =
      LatticeState<Scalar>::Amplitudes::Zero(2 * t_max + 1, 2);
  amps(t_max, 0) = coin_amp0;
  amps(t_max, 1) = coin_amp1;
  return {t_max, 0, std::move(amps)};
}

// One application of S (I (x) H): Hadamard on every coin pair, then coin 0
// moves x -> x-1 and coin 1 moves x -> x+1.
template <typename Scalar>
LatticeState<Scalar> step(const LatticeState<Scalar>& state) {
  if (state.steps_taken() >= state.t_max())
    throw WindowExhaustedError("step: light cone would leave the lattice window");
  using Complex = std::complex<Scalar>;
  const Scalar h = Scalar(1) / std::sqrt(Scalar(2));
  const auto& in = state.amplitudes();
  const Eigen::Index n = in.rows();
  typename LatticeState<Scalar>::Amplitudes out = LatticeState<Scalar>::Amplitudes::Zero(n, 2);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Complex c0 = in(i, 0);
    const Complex c1 = in(i, 1);
    if (c0 == Complex(0) && c1 == Complex(0)) continue;
    if (i == 0 || i == n - 1)
      throw WindowExhaustedError("step: amplitude on the window edge would leave the lattice");
    out(i - 1, 0) += h * (c0 + c1);
    out(i + 1, 1) += h * (c0 - c1);
  }
  return {state.t_max(), state.steps_taken() + 1, std::move(out)};
}

template <typename Scalar>
LatticeState<Scalar> evolve(LatticeState<Scalar> state, int n_steps) {
  if (n_steps < 0) throw DomainError("evolve: negative step count");
  if (state.steps_taken() + n_steps > state.t_max())
    throw WindowExhaustedError("evolve: requested steps exceed the lattice window");
  for (int k = 0; k < n_steps; ++k) state = step(state);
  return state;
}

// Walk an initial coin state at the origin for `steps` steps on the tightest window.
template <typename Scalar>
LatticeState<Scalar> walk(int steps, std::complex<Scalar> coin_amp0, std::complex<Scalar> coin_amp1) {
  return evolve(init_walker_state(steps, coin_amp0, coin_amp1), steps);
}

template <typename Scalar>
struct PositionDistribution {
  int t_max = 0;
  std::vector<Scalar> probability;  // index x + t_max
  bool has_negative = false;

  Scalar at(int x) const { return probability[static_cast<std::size_t>(x + t_max)]; }
  Scalar total() const {
    Scalar s = 0;
    for (Scalar p : probability) s += p;
    return s;
  }
};

template <typename Scalar>
struct WeightedState {
  Scalar weight;
  LatticeState<Scalar> state;
};

// P(x) = sum_k w_k sum_c |amp_k(x, c)|^2. Negative weights pass through unclamped.
template <typename Scalar>
PositionDistribution<Scalar> position_distribution(std::span<const WeightedState<Scalar>> states) {
  if (states.empty()) throw ShapeError("position_distribution: empty ensemble");
  const int t_max = states.front().state.t_max();
  const int steps = states.front().state.steps_taken();
  Scalar weight_sum = 0;
  for (const auto& ws : states) {
    if (ws.state.t_max() != t_max || ws.state.steps_taken() != steps)
      throw ShapeError("position_distribution: states do not share t_max and steps_taken");
    weight_sum += ws.weight;
  }
  if (std::abs(weight_sum - Scalar(1)) > Scalar(1e-12))
    throw DomainError("position_distribution: weights do not sum to 1");

  PositionDistribution<Scalar> out;
  out.t_max = t_max;
  out.probability.assign(static_cast<std::size_t>(2 * t_max + 1), Scalar(0));
  for (const auto& ws : states) {
    const auto site_mass = ws.state.amplitudes().rowwise().squaredNorm();
    for (Eigen::Index i = 0; i < site_mass.size(); ++i)
      out.probability[static_cast<std::size_t>(i)] += ws.weight * site_mass(i);
  }
  for (Scalar p : out.probability)
    if (p < 0) out.has_negative = true;
  return out;
}

}  // namespace qwalk
