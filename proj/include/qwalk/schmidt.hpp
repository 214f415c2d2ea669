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

#include "qwalk/bell.hpp"

namespace qwalk {

// |psi> = s0 |u0>|b0> + s1 |u1>|b1> over the coin-walker cut, s0 >= s1 >= 0.
struct SchmidtData {
  int t_max = 0;
  double s0 = 1.0;
  double s1 = 0.0;
  CoinVector u0 = CoinVector(1.0, 0.0);
  CoinVector u1 = CoinVector(0.0, 1.0);
  VectorXc b0;
  VectorXc b1;
  bool degenerate = false;  // s1 < 1e-12: b1 is an arbitrary completion

  // max over (x, c) of |sum_mu s_mu u_mu(c) b_mu(x) - psi(x, c)|, in 2-norm.
  double reconstruction_residual(const WalkState& state) const;
};

SchmidtData schmidt_decompose(const WalkState& state);

// 2 sqrt(1 + 4 s0^2 s1^2)
double horodecki_max(double s0, double s1);

EmbeddedWalkerObservable embed_subspace_observable(const Matrix2c& sub, const SchmidtData& sd);

struct ChshSettings {
  CoinObservable a0;
  CoinObservable a1;
  EmbeddedWalkerObservable b0;
  EmbeddedWalkerObservable b1;
  double target = 0.0;    // horodecki_max(s0, s1)
  double achieved = 0.0;  // S on the decomposed state
  bool refined = false;
};

// Canonical optimum A0 = sz~, A1 = sx~, B_{0,1} = cos(mu) sz~ +- sin(mu) sx~ with
// tan(mu) = 2 s0 s1, checked against the state and refined over Bob's two
// angles if the check misses.
ChshSettings optimal_chsh_settings(const SchmidtData& sd, const WalkState& state);

// cos(theta) sz + sin(theta) sx in the Schmidt subspace basis.
Matrix2c xz_plane_observable(double theta);

}  // namespace qwalk
