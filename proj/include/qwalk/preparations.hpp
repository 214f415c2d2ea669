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
#include <vector>

#include "qwalk/types.hpp"
#include "qwalk/walk.hpp"

namespace qwalk {

// Bloch parametrization of a trace-one Hermitian coin operator (I + r.sigma)/2.
// Physical iff norm() <= 1; for norm() > 1 the operator is nonpositive.
struct BlochVector {
  Vec3 r = Vec3::Zero();

  BlochVector() = default;
  explicit BlochVector(const Vec3& v) : r(v) {}
  BlochVector(double rx, double ry, double rz) : r(rx, ry, rz) {}
  // norm * direction; direction must be a unit vector.
  static BlochVector from_polar(double norm, const Vec3& direction) { return BlochVector(norm * direction); }

  double norm() const { return r.norm(); }
  bool physical() const { return norm() <= 1.0; }
  bool extended() const { return norm() > 1.0; }
};

struct EnsembleMember {
  double weight = 0.0;
  CoinVector coin = CoinVector(1.0, 0.0);
};

// Weighted pure coin preparations; weights sum to one and may be negative.
struct SignedEnsemble {
  std::vector<EnsembleMember> members;

  double weight_sum() const;
  double l1_norm() const;
};

// +1 eigenvector of n.sigma, phase fixed so the first nonzero amplitude is real positive.
CoinVector coin_state_from_direction(const Vec3& unit_dir);

// (1 + |r|)/2 on the +r^ state and (1 - |r|)/2 on the -r^ state; r = 0 maps to
// equal weights on +-z.
SignedEnsemble signed_decomposition(const BlochVector& r);

double negativity_cost(const BlochVector& r);

// Nominal variance scale N^2 / n_shots of a reconstructed +-1 correlator.
double sampling_overhead(const BlochVector& r, long long n_shots);

// Each member's coin placed at the origin and walked `steps` steps.
struct EvolvedBranch {
  double weight = 0.0;
  WalkState state;
};
using EvolvedEnsemble = std::vector<EvolvedBranch>;

EvolvedEnsemble evolve_ensemble(const SignedEnsemble& ensemble, int steps);

std::vector<WeightedState<double>> as_weighted_states(const EvolvedEnsemble& ensemble);

}  // namespace qwalk
