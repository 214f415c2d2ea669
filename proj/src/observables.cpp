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

#include "qwalk/observables.hpp"

#include <cmath>

#include "qwalk/errors.hpp"

namespace qwalk {

CoinObservable::CoinObservable(const Vec3& dir) : direction(dir) {
  if (!dir.allFinite() || std::abs(dir.norm() - 1.0) > 1e-10)
    throw DomainError("CoinObservable: direction is not a unit vector");
}

Matrix2c CoinObservable::projector(int outcome) const {
  return 0.5 * (Matrix2c::Identity() + static_cast<double>(outcome) * matrix());
}

VectorXc EmbeddedWalkerObservable::apply(const VectorXc& v) const {
  const Eigen::Vector2cd coords = basis.adjoint() * v;
  return v + basis * ((subspace - Matrix2c::Identity()) * coords);
}

MatrixXc EmbeddedWalkerObservable::dense() const {
  const Eigen::Index n = basis.rows();
  return MatrixXc::Identity(n, n) + basis * (subspace - Matrix2c::Identity()) * basis.adjoint();
}

int walker_t_max(const WalkerObservable& obs) {
  return std::visit([](const auto& o) { return o.t_max; }, obs);
}

namespace {

void check_window(const WalkState& state, const WalkerObservable& obs) {
  if (walker_t_max(obs) != state.t_max())
    throw ShapeError("walker observable window does not match the lattice state");
}

}  // namespace

Matrix2c conditional_cross_operator(const WalkState& left, const WalkState& right, const WalkerObservable& obs,
                                    int outcome) {
  check_window(left, obs);
  check_window(right, obs);
  const auto& lhs = left.amplitudes();
  const auto& rhs = right.amplitudes();
  if (const auto* bin = std::get_if<DiagonalBinning>(&obs)) {
    Matrix2c g = Matrix2c::Zero();
    for (Eigen::Index i = 0; i < lhs.rows(); ++i) {
      if (bin->labels[static_cast<std::size_t>(i)] != outcome) continue;
      g.noalias() += lhs.row(i).transpose() * rhs.row(i).conjugate();
    }
    return g;
  }
  const auto& emb = std::get<EmbeddedWalkerObservable>(obs);
  // Pi_b psi = (1 + b)/2 psi + b/2 V (sub - I) V^dagger psi, column by column.
  const double b = static_cast<double>(outcome);
  const Eigen::Matrix2cd coords = emb.basis.adjoint() * lhs;
  const MatrixXc projected =
      0.5 * (1.0 + b) * lhs + 0.5 * b * emb.basis * ((emb.subspace - Matrix2c::Identity()) * coords);
  return projected.transpose() * rhs.conjugate();
}

Matrix2c conditional_coin_operator(const WalkState& state, const WalkerObservable& obs, int outcome) {
  return conditional_cross_operator(state, state, obs, outcome);
}

Matrix2c walker_weighted_coin_operator(const WalkState& state, const WalkerObservable& obs) {
  check_window(state, obs);
  const auto& psi = state.amplitudes();
  if (const auto* bin = std::get_if<DiagonalBinning>(&obs)) {
    Matrix2c g = Matrix2c::Zero();
    for (Eigen::Index i = 0; i < psi.rows(); ++i) {
      const Eigen::Vector2cd site = psi.row(i).transpose();
      g.noalias() += static_cast<double>(bin->labels[static_cast<std::size_t>(i)]) * (site * site.adjoint());
    }
    return g;
  }
  const auto& emb = std::get<EmbeddedWalkerObservable>(obs);
  const Eigen::Matrix2cd coords = emb.basis.adjoint() * psi;
  const MatrixXc applied = psi + emb.basis * ((emb.subspace - Matrix2c::Identity()) * coords);
  return applied.transpose() * psi.conjugate();
}

}  // namespace qwalk
