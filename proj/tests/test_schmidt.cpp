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

#include "doctest.h"

#include <cmath>

#include "oracles.hpp"
#include "qwalk/rng.hpp"
#include "qwalk/schmidt.hpp"

using namespace qwalk;

namespace {

WalkState random_state(Rng& rng, int t_max) {
  WalkState::Amplitudes amps(2 * t_max + 1, 2);
  for (Eigen::Index i = 0; i < amps.rows(); ++i)
    for (int c = 0; c < 2; ++c) amps(i, c) = Complex(rng.normal(), rng.normal());
  amps /= std::sqrt(amps.squaredNorm());
  return {t_max, 0, amps};
}

oracle::Vec flatten(const WalkState& s) {
  oracle::Vec v(2 * s.sites());
  for (Eigen::Index i = 0; i < s.sites(); ++i)
    for (int c = 0; c < 2; ++c) v(2 * i + c) = s.amplitudes()(i, c);
  return v;
}

}  // namespace

TEST_CASE("Schmidt decomposition of small walks") {
  const auto t0 = walk<double>(0, 1.0, 0.0);
  const auto sd0 = schmidt_decompose(t0);
  CHECK(sd0.s0 == doctest::Approx(1.0));
  CHECK(sd0.s1 == 0.0);
  CHECK(sd0.degenerate);
  CHECK(horodecki_max(sd0.s0, sd0.s1) == doctest::Approx(2.0));
  CHECK_THROWS_AS(optimal_chsh_settings(sd0, t0), NoEntanglementError);

  const auto t1 = walk<double>(1, 1.0, 0.0);
  const auto sd1 = schmidt_decompose(t1);
  CHECK(std::abs(sd1.s0 - 1.0 / std::sqrt(2.0)) < 1e-12);
  CHECK(std::abs(sd1.s1 - 1.0 / std::sqrt(2.0)) < 1e-12);
  CHECK(std::abs(horodecki_max(sd1.s0, sd1.s1) - 2.0 * std::sqrt(2.0)) < 1e-12);
  CHECK(sd1.reconstruction_residual(t1) < 1e-12);
}

TEST_CASE("benchmark state at T = 60") {
  const auto s = walk<double>(60, 1.0, 0.0);
  const auto sd = schmidt_decompose(s);
  CHECK(std::abs(sd.s0 - 0.843) < 0.005);
  CHECK(std::abs(sd.s1 - 0.538) < 0.005);
  CHECK(std::abs(horodecki_max(sd.s0, sd.s1) - 2.70) < 0.005);
  CHECK(sd.reconstruction_residual(s) < 1e-12);
  CHECK(std::abs(sd.b0.norm() - 1.0) < 1e-12);
  CHECK(std::abs(sd.b1.norm() - 1.0) < 1e-12);
  CHECK(std::abs(sd.b0.dot(sd.b1)) < 1e-12);
  CHECK(std::abs(sd.u0.dot(sd.u1)) < 1e-12);
}

TEST_CASE("horodecki_max is bounded and monotone in the smaller coefficient") {
  double prev = 0.0;
  for (int k = 0; k <= 100; ++k) {
    const double s1 = std::sqrt(0.5) * k / 100.0;
    const double s0 = std::sqrt(1.0 - s1 * s1);
    const double v = horodecki_max(s0, s1);
    CHECK(v >= 2.0 - 1e-15);
    CHECK(v <= 2.0 * std::sqrt(2.0) + 1e-15);
    CHECK(v >= prev);
    prev = v;
  }
  CHECK_THROWS_AS(horodecki_max(0.9, 0.9), DomainError);
  CHECK_THROWS_AS(horodecki_max(-0.6, 0.8), DomainError);
}

TEST_CASE("optimal settings saturate the maximum on the T = 60 benchmark") {
  const auto s = walk<double>(60, 1.0, 0.0);
  const auto sd = schmidt_decompose(s);
  const auto settings = optimal_chsh_settings(sd, s);
  CHECK(std::abs(settings.achieved - settings.target) < 1e-6);
  CHECK(std::abs(settings.target - horodecki_max(sd.s0, sd.s1)) < 1e-15);
  CHECK(std::abs(oracle::brute_force_chsh(flatten(s)) - settings.target) < 1e-6);
}

TEST_CASE("optimal settings saturate on random entangled states and match brute force") {
  Rng rng(2024);
  for (int k = 0; k < 100; ++k) {
    const auto s = random_state(rng, 1 + k % 4);
    const auto sd = schmidt_decompose(s);
    REQUIRE(sd.s1 > 1e-6);
    CHECK(sd.reconstruction_residual(s) < 1e-12);
    const auto settings = optimal_chsh_settings(sd, s);
    CHECK(std::abs(settings.achieved - settings.target) < 1e-6);
    CHECK(std::abs(oracle::brute_force_chsh(flatten(s)) - settings.target) < 1e-6);
  }
}

TEST_CASE("embedded walker observables are dichotomic") {
  const auto s = walk<double>(10, 1.0, 0.0);
  const auto sd = schmidt_decompose(s);
  for (double theta : {0.0, 0.4, -1.1, 2.0}) {
    const auto obs = embed_subspace_observable(xz_plane_observable(theta), sd);
    const MatrixXc b = obs.dense();
    const auto n = b.rows();
    CHECK((b - b.adjoint()).norm() < 1e-12);
    CHECK((b * b - MatrixXc::Identity(n, n)).norm() < 1e-12);
    // Trace: +1 on the complement, the subspace block has trace 0.
    CHECK(std::abs(b.trace() - Complex(static_cast<double>(n - 2))) < 1e-12);
    VectorXc v = VectorXc::Zero(n);
    v(3) = 1.0;
    CHECK((obs.apply(v) - b * v).norm() < 1e-12);
  }
  Matrix2c not_involution = Matrix2c::Identity() * 2.0;
  CHECK_THROWS_AS(embed_subspace_observable(not_involution, sd), DomainError);
}
