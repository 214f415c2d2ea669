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
#include "qwalk/bell.hpp"
#include "qwalk/rng.hpp"
#include "qwalk/schmidt.hpp"

using namespace qwalk;

namespace {

const double kTsirelson = 2.0 * std::sqrt(2.0);

DiagonalBinning random_binning(Rng& rng, int t_max) {
  DiagonalBinning b{t_max, {}};
  for (int x = -t_max; x <= t_max; ++x) b.labels.push_back(rng.uniform() < 0.5 ? 1 : -1);
  return b;
}

// A Schmidt-aligned observable of a random walk, or a random binning.
WalkerObservable random_walker_observable(Rng& rng, int steps) {
  if (rng.uniform() < 0.5) return random_binning(rng, steps);
  const auto dir = sample_unit_sphere(rng);
  const auto c = coin_state_from_direction(dir);
  const auto sd = schmidt_decompose(walk<double>(steps, c(0), c(1)));
  return embed_subspace_observable(xz_plane_observable(6.283185307179586 * rng.uniform()), sd);
}

oracle::Mat dense_walker(const WalkerObservable& obs) {
  if (const auto* b = std::get_if<DiagonalBinning>(&obs)) return oracle::diagonal_operator(b->labels);
  return std::get<EmbeddedWalkerObservable>(obs).dense();
}

JointTable pr_box() {
  JointTable t;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int a : {1, -1})
        for (int b : {1, -1}) {
          const bool agree = a == b;
          const bool want_agree = !(i == 1 && j == 1);
          t.at(a, b, i, j) = agree == want_agree ? 0.5 : 0.0;
        }
  return t;
}

}  // namespace

TEST_CASE("sign and threshold binnings") {
  CHECK(sign_binning(2).labels == std::vector<int>{-1, -1, 1, 1, 1});
  CHECK(sign_binning(2, -1).labels == std::vector<int>{-1, -1, -1, 1, 1});
  CHECK(sign_binning(0).labels == std::vector<int>{1});
  CHECK(sign_binning(0, -1).labels == std::vector<int>{-1});
  CHECK_THROWS_AS(sign_binning(2, 0), DomainError);

  CHECK(threshold_binning(3, 2).labels == std::vector<int>{1, 1, -1, -1, -1, 1, 1});
  CHECK(threshold_binning(3, 0).labels == std::vector<int>(7, 1));
  CHECK(threshold_binning(3, 4).labels == std::vector<int>(7, -1));
  CHECK_THROWS_AS(threshold_binning(3, 5), DomainError);
  CHECK_THROWS_AS(threshold_binning(3, -1), DomainError);
  const auto b = threshold_binning(60, 36);
  CHECK(b.label(35) == -1);
  CHECK(b.label(36) == 1);
  CHECK(b.label(-36) == 1);
}

TEST_CASE("sign_of_zero is immaterial at odd step counts") {
  const CoinObservable a(Vec3::UnitX());
  const auto ens = evolve_ensemble(signed_decomposition(BlochVector(0.2, 0.7, -0.4)), 7);
  CHECK(correlator(ens, sign_binning(7, 1), a) == correlator(ens, sign_binning(7, -1), a));
}

TEST_CASE("correlator examples") {
  const auto ens = evolve_ensemble(signed_decomposition(BlochVector(0, 0, 1)), 0);
  CHECK(correlator(ens, threshold_binning(0, 0), CoinObservable(Vec3::UnitZ())) == doctest::Approx(1.0));

  Rng rng(9);
  for (int k = 0; k < 20; ++k) {
    const int steps = 1 + static_cast<int>(rng.next() % 12);
    const auto e = evolve_ensemble(signed_decomposition(BlochVector(1.6 * rng.uniform() * sample_unit_sphere(rng))), steps);
    const Vec3 dir = sample_unit_sphere(rng);
    const auto b = random_walker_observable(rng, steps);
    CHECK(std::abs(correlator(e, b, CoinObservable(dir)) + correlator(e, b, CoinObservable(-dir))) < 1e-13);
  }
  const auto t5 = evolve_ensemble(signed_decomposition(BlochVector(0, 0, 1)), 5);
  const auto t6 = evolve_ensemble(signed_decomposition(BlochVector(0, 0, 1)), 6);
  EvolvedEnsemble mixed = {{0.5, t5[0].state}, {0.5, t6[0].state}};
  CHECK_THROWS_AS(correlator(mixed, sign_binning(6), CoinObservable()), ShapeError);
}

TEST_CASE("streaming correlators match the dense oracle for T <= 10") {
  Rng rng(17);
  for (int steps = 1; steps <= 10; ++steps)
    for (int rep = 0; rep < 6; ++rep) {
      const auto c = coin_state_from_direction(sample_unit_sphere(rng));
      const auto state = walk<double>(steps, c(0), c(1));
      const EvolvedEnsemble ens = {{1.0, state}};
      const Vec3 dir = sample_unit_sphere(rng);
      const auto b = random_walker_observable(rng, steps);
      const double streamed = correlator(ens, b, CoinObservable(dir));
      const double dense = oracle::dense_expectation(oracle::dense_walk(steps, c(0), c(1)), dense_walker(b),
                                                     bloch_operator(dir));
      CHECK(std::abs(streamed - dense) < 1e-12);
    }
}

TEST_CASE("joint tables satisfy the marginal consistency formula") {
  Rng rng(23);
  for (int k = 0; k < 50; ++k) {
    const int steps = 1 + static_cast<int>(rng.next() % 10);
    const auto ens = evolve_ensemble(signed_decomposition(BlochVector(2.0 * rng.uniform() * sample_unit_sphere(rng))), steps);
    const CoinObservable a[2] = {CoinObservable(sample_unit_sphere(rng)), CoinObservable(sample_unit_sphere(rng))};
    const WalkerObservable b[2] = {random_walker_observable(rng, steps), random_walker_observable(rng, steps)};
    const auto t = joint_table(ens, a[0], a[1], b[0], b[1]);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        CHECK(std::abs(t.setting_sum(i, j) - 1.0) < 1e-10);
        const double ea = correlator(ens, threshold_binning(steps, 0), a[i]);
        double eb = 0.0;
        for (const auto& branch : ens)
          eb += branch.weight * walker_weighted_coin_operator(branch.state, b[j]).trace().real();
        const double eab = correlator(ens, b[j], a[i]);
        CHECK(std::abs(t.correlator(i, j) - eab) < 1e-12);
        for (int av : {1, -1})
          for (int bv : {1, -1})
            CHECK(std::abs(t.at(av, bv, i, j) - 0.25 * (1 + av * ea + bv * eb + av * bv * eab)) < 1e-10);
      }
  }
}

TEST_CASE("maximally mixed coin at T = 0 has flat marginals") {
  const auto ens = evolve_ensemble(signed_decomposition(BlochVector()), 0);
  const auto t = joint_table(ens, CoinObservable(Vec3::UnitX()), CoinObservable(Vec3::UnitZ()),
                             sign_binning(0), threshold_binning(0, 1));
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      CHECK(t.alice_marginal(1, i, j) == doctest::Approx(0.5));
      CHECK(t.alice_marginal(-1, i, j) == doctest::Approx(0.5));
    }
}

TEST_CASE("check_admissible") {
  JointTable uniform;
  uniform.entries().fill(0.25);
  const auto ok = check_admissible(uniform);
  CHECK(ok.admissible);
  CHECK(ok.min_p == 0.25);

  JointTable neg = uniform;
  neg.at(1, 1, 0, 0) = -0.01;
  neg.at(1, -1, 0, 0) = 0.26;
  neg.at(-1, 1, 0, 0) = 0.25;
  neg.at(-1, -1, 0, 0) = 0.5;
  const auto bad = check_admissible(neg);
  CHECK_FALSE(bad.admissible);
  CHECK(bad.min_p == -0.01);

  JointTable unnormalized = uniform;
  unnormalized.at(1, 1, 1, 1) = 0.3;
  CHECK_FALSE(check_admissible(unnormalized).admissible);
}

TEST_CASE("check_no_signaling") {
  JointTable uniform;
  uniform.entries().fill(0.25);
  CHECK(check_no_signaling(uniform).no_signaling);

  // Within Bob's b = +1 column, move 0.1 from a = +1 to a = -1 for j = 1 only.
  JointTable signaling = uniform;
  for (int i = 0; i < 2; ++i) {
    signaling.at(1, 1, i, 1) -= 0.1;
    signaling.at(-1, 1, i, 1) += 0.1;
  }
  const auto ns = check_no_signaling(signaling);
  CHECK_FALSE(ns.no_signaling);
  CHECK(ns.max_deviation == doctest::Approx(0.1));

  const auto box = pr_box();
  CHECK(check_no_signaling(box).no_signaling);
  CHECK(check_admissible(box).admissible);
  CHECK(box.chsh() == 4.0);
  const auto report = make_report(box);
  CHECK(report.accepted());
  CHECK(report.S == 4.0);
}

TEST_CASE("response kernel agrees with the direct route") {
  Rng rng(31);
  for (int k = 0; k < 40; ++k) {
    const int steps = 1 + static_cast<int>(rng.next() % 20);
    const WalkerObservable b0 = random_walker_observable(rng, steps);
    const WalkerObservable b1 = random_walker_observable(rng, steps);
    const ResponseKernel kernel(steps, b0, b1);
    const auto ens = signed_decomposition(BlochVector(2.0 * rng.uniform() * sample_unit_sphere(rng)));
    const CoinObservable a0(sample_unit_sphere(rng)), a1(sample_unit_sphere(rng));
    const auto fast = kernel.table(ens, a0, a1);
    const auto direct = joint_table(evolve_ensemble(ens, steps), a0, a1, b0, b1);
    for (std::size_t e = 0; e < 16; ++e) CHECK(std::abs(fast.entries()[e] - direct.entries()[e]) < 1e-12);
  }
}

TEST_CASE("evaluate_witness composes evolution and evaluation") {
  const auto w = evaluate_witness(BlochVector(0.1, 0.2, 1.3), {Vec3::UnitX(), Vec3::UnitZ()},
                                  {sign_binning(12), threshold_binning(12, 7)}, 12);
  const auto& r = w.report;
  CHECK(std::abs(r.S - (r.E[0][0] + r.E[0][1] + r.E[1][0] - r.E[1][1])) < 1e-12);
  CHECK(std::abs(r.S - w.table.chsh()) < 1e-12);
  CHECK(r.no_signaling);
  CHECK(r.ns_deviation <= 1e-12);
}

TEST_CASE("Tsirelson ceiling and no-signaling on random configurations") {
  Rng rng(41);
  for (int k = 0; k < 500; ++k) {
    const int steps = 1 + static_cast<int>(rng.next() % 12);
    const bool quantum = k % 2 == 0;
    const double norm = quantum ? rng.uniform() : 2.0 * rng.uniform();
    const auto ens = evolve_ensemble(signed_decomposition(BlochVector(norm * sample_unit_sphere(rng))), steps);
    const auto t = joint_table(ens, CoinObservable(sample_unit_sphere(rng)), CoinObservable(sample_unit_sphere(rng)),
                               random_walker_observable(rng, steps), random_walker_observable(rng, steps));
    const auto r = make_report(t);
    if (quantum) CHECK(std::abs(r.S) <= kTsirelson + 1e-9);
    CHECK(r.ns_deviation <= 1e-11);
    CHECK(r.normalization_error <= 1e-10);
  }
}

TEST_CASE("deterministic local assignments respect the classical bound") {
  double worst = 0.0;
  for (int mask = 0; mask < 16; ++mask) {
    const int a[2] = {mask & 1 ? 1 : -1, mask & 2 ? 1 : -1};
    const int b[2] = {mask & 4 ? 1 : -1, mask & 8 ? 1 : -1};
    JointTable t;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) t.at(a[i], b[j], i, j) = 1.0;
    CHECK(check_no_signaling(t).no_signaling);
    worst = std::max(worst, std::abs(t.chsh()));
  }
  CHECK(worst == 2.0);
}

TEST_CASE("CHSH arithmetic of reference coarse-grained correlators") {
  const double s = 0.6324 + 0.2198 + 0.6627 - (-0.1517);
  CHECK(std::abs(s - 1.6666) < 1e-12);
  CHECK(std::abs(s - 1.6665) < 2e-4);
}
