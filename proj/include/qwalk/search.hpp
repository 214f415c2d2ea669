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

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "qwalk/bell.hpp"
#include "qwalk/rng.hpp"
#include "qwalk/schmidt.hpp"

namespace qwalk {

// Worker threads for the search drivers: QWALK_WORKERS if set and positive,
// otherwise the number of logical cores.
int worker_count();

// Runs task(k) for k in [0, n) on worker_count() threads.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& task);

// Integer threshold for a ratio x0/T: nearest integer, ties toward zero.
int x0_from_ratio(double ratio, int steps);

// Bob's settings, stored so a witness can be rebuilt from scratch.
struct BinningSettings {
  int sign_of_zero = 1;
  int x0 = 0;
};

struct SchmidtSettings {
  Vec3 benchmark_dir = Vec3::UnitZ();
  Matrix2c sub0 = Matrix2c::Identity();
  Matrix2c sub1 = Matrix2c::Identity();
};

using WalkerSettings = std::variant<BinningSettings, SchmidtSettings>;

std::pair<WalkerObservable, WalkerObservable> build_walker_observables(const WalkerSettings& settings, int steps);

struct WitnessRecord {
  int steps = 0;
  Vec3 prep_dir = Vec3::UnitZ();
  double r_norm = 1.0;
  Vec3 a0 = Vec3::UnitZ();
  Vec3 a1 = Vec3::UnitX();
  WalkerSettings walker;
  BellReport report;
  JointTable table;
  std::uint64_t seed = 0;
  std::int64_t trial = 0;
  bool refined = false;  // polished by local search from random trial `trial`

  BlochVector prep() const { return BlochVector::from_polar(r_norm, prep_dir); }
};

// Evaluates the record's configuration again through the direct walk route.
WitnessEvaluation reevaluate(const WitnessRecord& record, double tol);

// Exact tables of the two physical branches of a record's signed ensemble,
// each evaluated as a weight-one preparation.
struct BranchTables {
  JointTable plus;
  JointTable minus;
  std::pair<double, double> weights;
};
BranchTables witness_branch_tables(const WitnessRecord& record, double tol);

// Deterministic order: larger |S| first, then smaller (seed, x0, trial).
bool better_witness(const WitnessRecord& lhs, const WitnessRecord& rhs);

// --- Schmidt-aligned benchmark ---------------------------------------------

struct BenchmarkDirection {
  bool found = false;
  std::string label;
  Vec3 direction = Vec3::UnitZ();
  SchmidtData schmidt;
  double deviation = 0.0;  // max |s_mu - target_mu|
};

// Tests +-x, +-y, +-z and then a polar grid; among candidates within tol the
// closest is returned (canonical directions before the grid).
BenchmarkDirection discover_benchmark_direction(int steps, std::pair<double, double> target, double tol);

struct Benchmark {
  int steps = 0;
  Vec3 direction = Vec3::UnitZ();
  WalkState state;
  SchmidtData schmidt;
  ChshSettings settings;
  double s_max = 0.0;
};

Benchmark make_benchmark(int steps, const Vec3& direction);

SchmidtSettings schmidt_settings_of(const Benchmark& bench);

struct ScanPoint {
  double r_norm = 0.0;
  bool found = false;
  double best_S = 0.0;  // |S| of the best accepted direction
  double min_p = 0.0;
  long long n_samples = 0;
  long long n_accepted = 0;
  std::optional<WitnessRecord> witness;
};

struct ScanOptions {
  long long n_dirs = 10000;
  std::uint64_t seed = 1;
  double tol = kDefaultTolerance;
  // Accepted candidates must also satisfy min_p >= margin_floor.
  double margin_floor = -1.0;
};

// Directions are drawn from stream (seed, direction index), so every |r| in the
// grid sees the same direction set.
std::vector<ScanPoint> benchmark_scan_r(const Benchmark& bench, const std::vector<double>& r_grid,
                                        const ScanOptions& opts);

// --- Coarse-grained search -------------------------------------------------

struct SearchConfig {
  int steps = 60;
  double r_norm = 1.45;
  long long n_trials = 10000;
  // Threshold grid: x0_grid if nonempty, else x0_ratios mapped through
  // x0_from_ratio, else every integer in [0, steps].
  std::vector<int> x0_grid;
  std::vector<double> x0_ratios;
  std::vector<std::uint64_t> seeds = {1, 2, 3, 4, 5, 6, 7, 8};
  double tol = kDefaultTolerance;
  int sign_of_zero = 1;
  // The best `refine_starts` accepted random trials of each (seed, x0) are
  // polished by a compass search; 0 gives the plain randomized search.
  int refine_starts = 0;
  // Refined candidates must keep min_p >= refine_margin (and never rely on the
  // -tol slack of the acceptance test).
  double refine_margin = 0.0;

  std::vector<int> resolved_x0_grid() const;
  void validate() const;
};

struct ThresholdSummary {
  int x0 = 0;
  bool found = false;
  double best_S = 0.0;
  double min_p = 0.0;
  long long accepted = 0;
  long long accepted_gt2 = 0;
};

struct SeedSummary {
  std::uint64_t seed = 0;
  bool found = false;
  double best_S = 0.0;
  double min_p = 0.0;
  int x0 = 0;
};

struct CoarseResult {
  std::optional<WitnessRecord> best;
  long long trials = 0;
  long long accepted = 0;
  long long accepted_gt2 = 0;
  std::vector<ThresholdSummary> per_x0;
  std::vector<SeedSummary> per_seed;

  double fraction_gt2() const { return accepted > 0 ? static_cast<double>(accepted_gt2) / accepted : 0.0; }
};

// Trial k of seed s at threshold x0 draws r^, a^, a^' (in that order) from
// stream (s, x0, k); results do not depend on the grid or the thread count.
// Acceptance counts cover the random trials only; refined candidates compete
// for the best records.
CoarseResult coarse_search(const SearchConfig& cfg);

// Compass search over the Cartesian components of (r^, a^, a^'), each vector
// renormalized after a move. A move is kept only if the table stays accepted
// with min_p >= max(margin, 0) and |S| grows; steps halve from 0.1 down to 1e-7.
WitnessRecord refine_witness(const WitnessRecord& start, const ResponseKernel& kernel, double tol, double margin);

struct SweepRow {
  int steps = 0;
  bool found = false;
  double best_S = 0.0;
  double median_S = 0.0;
  double fraction_gt2 = 0.0;
  double typical_min_p = 0.0;  // median over seeds of the per-seed best witness margin
  std::vector<SeedSummary> per_seed;
  std::optional<WitnessRecord> best;
};

// Runs coarse_search at each T with the template's trials, seeds, tol and
// threshold ratios; an explicit x0_grid in the template is ignored.
std::vector<SweepRow> finite_time_sweep(const std::vector<int>& steps_list, double r_norm,
                                        const SearchConfig& per_t);

}  // namespace qwalk
