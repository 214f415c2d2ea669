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

#include "qwalk/preparations.hpp"

#include <algorithm>
#include <cmath>

#include "qwalk/errors.hpp"

namespace qwalk {

double SignedEnsemble::weight_sum() const {
  double s = 0.0;
  for (const auto& m : members) s += m.weight;
  return s;
}

double SignedEnsemble::l1_norm() const {
  double s = 0.0;
  for (const auto& m : members) s += std::abs(m.weight);
  return s;
}

CoinVector coin_state_from_direction(const Vec3& unit_dir) {
  if (!unit_dir.allFinite() || std::abs(unit_dir.norm() - 1.0) > 1e-10)
    throw DomainError("coin_state_from_direction: direction is not a unit vector");
  const Vec3 n = unit_dir.normalized();
  // (cos(theta/2), e^{i phi} sin(theta/2)) without trigonometry so axis
  // directions come out exact.
  const double a = std::sqrt(std::max(0.0, (1.0 + n.z()) / 2.0));
  if (a > 1e-12) return CoinVector(a, Complex(n.x(), n.y()) / (2.0 * a));
  return CoinVector(0.0, 1.0);
}

SignedEnsemble signed_decomposition(const BlochVector& r) {
  if (!r.r.allFinite()) throw DomainError("signed_decomposition: non-finite Bloch vector");
  const double norm = r.norm();
  if (norm == 0.0) return {{{0.5, CoinVector(1.0, 0.0)}, {0.5, CoinVector(0.0, 1.0)}}};
  const Vec3 dir = r.r / norm;
  const double w_plus = (1.0 + norm) / 2.0;
  // 1 - w_plus keeps the weight sum exactly one in floating point.
  return {{{w_plus, coin_state_from_direction(dir)}, {1.0 - w_plus, coin_state_from_direction(-dir)}}};
}

double negativity_cost(const BlochVector& r) { return std::max(r.norm(), 1.0); }

double sampling_overhead(const BlochVector& r, long long n_shots) {
  if (n_shots < 1) throw DomainError("sampling_overhead: n_shots must be at least 1");
  const double cost = negativity_cost(r);
  return cost * cost / static_cast<double>(n_shots);
}

EvolvedEnsemble evolve_ensemble(const SignedEnsemble& ensemble, int steps) {
  EvolvedEnsemble out;
  out.reserve(ensemble.members.size());
  for (const auto& m : ensemble.members)
    out.push_back({m.weight, walk<double>(steps, m.coin(0), m.coin(1))});
  return out;
}

std::vector<WeightedState<double>> as_weighted_states(const EvolvedEnsemble& ensemble) {
  std::vector<WeightedState<double>> out;
  out.reserve(ensemble.size());
  for (const auto& b : ensemble) out.push_back({b.weight, b.state});
  return out;
}

}  // namespace qwalk
