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

#include <variant>
#include <vector>

#include "qwalk/types.hpp"
#include "qwalk/walk.hpp"

namespace qwalk {

// a.sigma on the coin, a a unit Bloch vector.
struct CoinObservable {
  Vec3 direction = Vec3::UnitZ();

  CoinObservable() = default;
  explicit CoinObservable(const Vec3& dir);

  Matrix2c matrix() const { return bloch_operator(direction); }
  // (I + a A) / 2
  Matrix2c projector(int outcome) const;
};

// Position measurement followed by a +-1 label per site x in [-t_max, t_max].
struct DiagonalBinning {
  int t_max = 0;
  std::vector<int> labels;  // index x + t_max

  int label(int x) const { return labels[static_cast<std::size_t>(x + t_max)]; }
};

// A dichotomic operator on span{b0, b1} (given by `subspace` in that basis)
// extended by +1 on the orthogonal complement.
struct EmbeddedWalkerObservable {
  int t_max = 0;
  Matrix2c subspace = Matrix2c::Identity();
  MatrixXc basis;  // (2 t_max + 1) x 2, orthonormal columns b0, b1

  // B v = v + V (subspace - I) V^dagger v
  VectorXc apply(const VectorXc& v) const;
  MatrixXc dense() const;
};

using WalkerObservable = std::variant<DiagonalBinning, EmbeddedWalkerObservable>;

int walker_t_max(const WalkerObservable& obs);

// Coin operator left after Bob's outcome b:
//   G_b = Tr_w[(Pi_b (x) I) |psi><psi|],  p(a, b) = Re Tr[Pi_a G_b].
// Indexing follows the walker (x) coin storage of LatticeState.
Matrix2c conditional_coin_operator(const WalkState& state, const WalkerObservable& obs, int outcome);

// (Pi_b left)^T conj(right); the bilinear form behind conditional_coin_operator.
Matrix2c conditional_cross_operator(const WalkState& left, const WalkState& right, const WalkerObservable& obs,
                                    int outcome);

// Tr_w[(B (x) I) |psi><psi|]; for a diagonal binning this is sum_x label(x) psi_x psi_x^dagger.
Matrix2c walker_weighted_coin_operator(const WalkState& state, const WalkerObservable& obs);

}  // namespace qwalk
