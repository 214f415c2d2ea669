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

#include "qwalk/search.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <set>
#include <thread>

#include "qwalk/errors.hpp"

namespace qwalk {

int worker_count() {
  if (const char* env = std::getenv("QWALK_WORKERS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<int>(v);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& task) {
  const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(worker_count()), n);
  if (workers <= 1) {
    for (std::size_t k = 0; k < n; ++k) task(k);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (std::size_t k = next++; k < n; k = next++) task(k);
    });
  for (auto& t : pool) t.join();
}

int x0_from_ratio(double ratio, int steps) {
  const double v = ratio * steps;
  const double lower = std::floor(v);
  const double frac = v - lower;
  if (frac == 0.5) return static_cast<int>(v >= 0 ? lower : lower + 1.0);
  return static_cast<int>(std::round(v));
}

std::pair<WalkerObservable, WalkerObservable> build_walker_observables(const WalkerSettings& settings, int steps) {
  if (const auto* bin = std::get_if<BinningSettings>(&settings))
    return {sign_binning(steps, bin->sign_of_zero), threshold_binning(steps, bin->x0)};
  const auto& sch = std::get<SchmidtSettings>(settings);
  const CoinVector coin = coin_state_from_direction(sch.benchmark_dir);
  const SchmidtData sd = schmidt_decompose(walk<double>(steps, coin(0), coin(1)));
  return {embed_subspace_observable(sch.sub0, sd), embed_subspace_observable(sch.sub1, sd)};
}

WitnessEvaluation reevaluate(const WitnessRecord& record, double tol) {
  return evaluate_witness(record.prep(), {record.a0, record.a1}, build_walker_observables(record.walker, record.steps),
                          record.steps, tol);
}

BranchTables witness_branch_tables(const WitnessRecord& record, double tol) {
  const auto [b0, b1] = build_walker_observables(record.walker, record.steps);
  const CoinObservable a0(record.a0);
  const CoinObservable a1(record.a1);
  const SignedEnsemble ens = signed_decomposition(record.prep());
  auto branch = [&](const EnsembleMember& m) {
    return joint_table(evolve_ensemble(SignedEnsemble{{{1.0, m.coin}}}, record.steps), a0, a1, b0, b1, tol);
  };
  return {branch(ens.members[0]), branch(ens.members[1]), {ens.members[0].weight, ens.members[1].weight}};
}

namespace {

int threshold_of(const WitnessRecord& r) {
  if (const auto* bin = std::get_if<BinningSettings>(&r.walker)) return bin->x0;
  return 0;
}

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

bool better_witness(const WitnessRecord& lhs, const WitnessRecord& rhs) {
  const double l = std::abs(lhs.report.S);
  const double r = std::abs(rhs.report.S);
  if (l != r) return l > r;
  if (lhs.seed != rhs.seed) return lhs.seed < rhs.seed;
  if (threshold_of(lhs) != threshold_of(rhs)) return threshold_of(lhs) < threshold_of(rhs);
  return lhs.trial < rhs.trial;
}

// --- benchmark ---------------------------------------------------------------

BenchmarkDirection discover_benchmark_direction(int steps, std::pair<double, double> target, double tol) {
  const auto [t0, t1] = target;
  if (steps < 0) throw DomainError("discover_benchmark_direction: negative walk time");
  if (!(t0 >= 0.0 && t1 >= 0.0) || std::abs(t0 * t0 + t1 * t1 - 1.0) > 1e-2)
    throw DomainError("discover_benchmark_direction: target coefficients violate s0^2 + s1^2 = 1");

  BenchmarkDirection best;
  best.deviation = std::numeric_limits<double>::infinity();
  auto consider = [&](const Vec3& dir, const std::string& label) {
    const CoinVector coin = coin_state_from_direction(dir);
    SchmidtData sd = schmidt_decompose(walk<double>(steps, coin(0), coin(1)));
    const double dev = std::max(std::abs(sd.s0 - t0), std::abs(sd.s1 - t1));
    if (dev < best.deviation) {
      best.deviation = dev;
      best.direction = dir;
      best.label = label;
      best.schmidt = std::move(sd);
    }
  };

  const std::pair<Vec3, const char*> canonical[] = {
      {Vec3::UnitX(), "+x"}, {-Vec3::UnitX(), "-x"}, {Vec3::UnitY(), "+y"},
      {-Vec3::UnitY(), "-y"}, {Vec3::UnitZ(), "+z"}, {-Vec3::UnitZ(), "-z"}};
  for (const auto& [dir, label] : canonical) consider(dir, label);
  if (best.deviation <= tol) {
    best.found = true;
    return best;
  }

  constexpr int kPolar = 36;
  constexpr int kAzimuth = 72;
  for (int i = 1; i < kPolar; ++i) {
    const double theta = std::numbers::pi * i / kPolar;
    for (int k = 0; k < kAzimuth; ++k) {
      const double phi = 2.0 * std::numbers::pi * k / kAzimuth;
      const Vec3 dir(std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta));
      consider(dir, "grid(" + std::to_string(i) + "," + std::to_string(k) + ")");
    }
  }
  best.found = best.deviation <= tol;
  return best;
}

Benchmark make_benchmark(int steps, const Vec3& direction) {
  Benchmark b;
  b.steps = steps;
  b.direction = direction;
  const CoinVector coin = coin_state_from_direction(direction);
  b.state = walk<double>(steps, coin(0), coin(1));
  b.schmidt = schmidt_decompose(b.state);
  b.settings = optimal_chsh_settings(b.schmidt, b.state);
  b.s_max = b.settings.target;
  return b;
}

SchmidtSettings schmidt_settings_of(const Benchmark& bench) {
  return {bench.direction, bench.settings.b0.subspace, bench.settings.b1.subspace};
}

std::vector<ScanPoint> benchmark_scan_r(const Benchmark& bench, const std::vector<double>& r_grid,
                                        const ScanOptions& opts) {
  if (r_grid.empty()) throw DomainError("benchmark_scan_r: empty |r| grid");
  if (opts.n_dirs < 1) throw DomainError("benchmark_scan_r: n_dirs must be at least 1");
  for (double r : r_grid)
    if (!std::isfinite(r) || r < 0.0) throw DomainError("benchmark_scan_r: |r| must be finite and nonnegative");

  const ResponseKernel kernel(bench.steps, bench.settings.b0, bench.settings.b1);
  const auto& a0 = bench.settings.a0;
  const auto& a1 = bench.settings.a1;

  struct Best {
    bool found = false;
    double abs_s = 0.0;
    long long index = 0;
    long long accepted = 0;
    JointTable table;
    BellReport report;
    Vec3 dir;
  };
  const long long n_chunks = std::min<long long>(opts.n_dirs, 64);
  std::vector<std::vector<Best>> partial(static_cast<std::size_t>(n_chunks), std::vector<Best>(r_grid.size()));

  parallel_for(static_cast<std::size_t>(n_chunks), [&](std::size_t chunk) {
    auto& local = partial[chunk];
    const long long begin = opts.n_dirs * static_cast<long long>(chunk) / n_chunks;
    const long long end = opts.n_dirs * static_cast<long long>(chunk + 1) / n_chunks;
    for (long long d = begin; d < end; ++d) {
      Rng rng = Rng::stream(opts.seed, {static_cast<std::uint64_t>(d)});
      const Vec3 dir = sample_unit_sphere(rng);
      for (std::size_t g = 0; g < r_grid.size(); ++g) {
        const JointTable t = kernel.table(signed_decomposition(BlochVector::from_polar(r_grid[g], dir)), a0, a1, opts.tol);
        const BellReport rep = make_report(t);
        if (!rep.accepted() || rep.min_p < opts.margin_floor) continue;
        Best& b = local[g];
        ++b.accepted;
        if (!b.found || std::abs(rep.S) > b.abs_s) {
          b.found = true;
          b.abs_s = std::abs(rep.S);
          b.index = d;
          b.table = t;
          b.report = rep;
          b.dir = dir;
        }
      }
    }
  });

  std::vector<ScanPoint> out;
  out.reserve(r_grid.size());
  const SchmidtSettings walker = schmidt_settings_of(bench);
  for (std::size_t g = 0; g < r_grid.size(); ++g) {
    ScanPoint pt;
    pt.r_norm = r_grid[g];
    pt.n_samples = opts.n_dirs;
    const Best* winner = nullptr;
    for (const auto& chunk : partial) {
      const Best& b = chunk[g];
      pt.n_accepted += b.accepted;
      if (!b.found) continue;
      // Chunks are visited in index order, so strict > keeps the lowest index on ties.
      if (winner == nullptr || b.abs_s > winner->abs_s) winner = &b;
    }
    if (winner != nullptr) {
      pt.found = true;
      pt.best_S = winner->abs_s;
      pt.min_p = winner->report.min_p;
      WitnessRecord w;
      w.steps = bench.steps;
      w.prep_dir = winner->dir;
      w.r_norm = r_grid[g];
      w.a0 = a0.direction;
      w.a1 = a1.direction;
      w.walker = walker;
      w.report = winner->report;
      w.table = winner->table;
      w.seed = opts.seed;
      w.trial = winner->index;
      pt.witness = std::move(w);
    }
    out.push_back(std::move(pt));
  }
  return out;
}

// --- coarse search -----------------------------------------------------------

std::vector<int> SearchConfig::resolved_x0_grid() const {
  if (!x0_grid.empty()) return x0_grid;
  std::vector<int> out;
  if (!x0_ratios.empty()) {
    std::set<int> seen;
    for (double ratio : x0_ratios) {
      const int x0 = x0_from_ratio(ratio, steps);
      if (seen.insert(x0).second) out.push_back(x0);
    }
    return out;
  }
  for (int x0 = 0; x0 <= steps; ++x0) out.push_back(x0);
  return out;
}

void SearchConfig::validate() const {
  if (steps < 0) throw ConfigError("T", "walk time must be nonnegative");
  if (!std::isfinite(r_norm) || r_norm < 0.0) throw ConfigError("r_norm", "must be finite and nonnegative");
  if (n_trials < 1) throw ConfigError("n_trials", "must be at least 1");
  if (refine_starts < 0) throw ConfigError("refine_starts", "must be nonnegative");
  if (!std::isfinite(refine_margin)) throw ConfigError("refine_margin", "must be finite");
  if (seeds.empty()) throw ConfigError("seeds", "must be nonempty");
  if (!(tol > 0.0)) throw ConfigError("tol", "must be positive");
  if (sign_of_zero != 1 && sign_of_zero != -1) throw ConfigError("sign_of_zero", "must be +1 or -1");
  const auto grid = resolved_x0_grid();
  if (grid.empty()) throw ConfigError("x0_grid", "must be nonempty");
  for (int x0 : grid)
    if (x0 < 0 || x0 > steps + 1) throw ConfigError("x0_grid", "threshold outside [0, T+1]");
}

WitnessRecord refine_witness(const WitnessRecord& start, const ResponseKernel& kernel, double tol, double margin) {
  const double floor = std::max(margin, 0.0);
  std::array<Vec3, 3> v = {start.prep_dir, start.a0, start.a1};
  auto evaluate = [&](const std::array<Vec3, 3>& u) {
    const JointTable t = kernel.table(signed_decomposition(BlochVector::from_polar(start.r_norm, u[0])),
                                      CoinObservable(u[1]), CoinObservable(u[2]), tol);
    return std::pair<JointTable, BellReport>{t, make_report(t)};
  };
  auto [table, report] = evaluate(v);
  if (!report.accepted() || report.min_p < floor) return start;
  double best = std::abs(report.S);
  for (double h = 0.1; h > 1e-7;) {
    bool moved = false;
    for (std::size_t vec = 0; vec < 3; ++vec)
      for (int axis = 0; axis < 3; ++axis)
        for (double dir : {+1.0, -1.0}) {
          std::array<Vec3, 3> trial = v;
          trial[vec](axis) += dir * h;
          if (!(trial[vec].norm() > 1e-6)) continue;
          trial[vec].normalize();
          auto [t, rep] = evaluate(trial);
          if (!rep.accepted() || rep.min_p < floor || !(std::abs(rep.S) > best)) continue;
          best = std::abs(rep.S);
          v = trial;
          table = t;
          report = rep;
          moved = true;
        }
    if (!moved) h *= 0.5;
  }
  WitnessRecord out = start;
  out.prep_dir = v[0];
  out.a0 = v[1];
  out.a1 = v[2];
  out.table = table;
  out.report = report;
  out.refined = std::abs(report.S) > std::abs(start.report.S);
  return out;
}

CoarseResult coarse_search(const SearchConfig& cfg) {
  cfg.validate();
  const std::vector<int> grid = cfg.resolved_x0_grid();
  const WalkerObservable sign = sign_binning(cfg.steps, cfg.sign_of_zero);
  std::vector<ResponseKernel> kernels;
  kernels.reserve(grid.size());
  for (int x0 : grid) kernels.emplace_back(cfg.steps, sign, threshold_binning(cfg.steps, x0));

  struct TaskResult {
    std::optional<WitnessRecord> best;
    long long accepted = 0;
    long long accepted_gt2 = 0;
  };
  const std::size_t n_seeds = cfg.seeds.size();
  const auto n_starts = static_cast<std::size_t>(cfg.refine_starts);
  std::vector<TaskResult> results(n_seeds * grid.size());

  parallel_for(results.size(), [&](std::size_t task) {
    const std::size_t si = task / grid.size();
    const std::size_t gi = task % grid.size();
    const std::uint64_t seed = cfg.seeds[si];
    const int x0 = grid[gi];
    const ResponseKernel& kernel = kernels[gi];
    TaskResult& res = results[task];
    // Best accepted random trials, ordered by better_witness; the front is the task best.
    std::vector<WitnessRecord> top;
    const std::size_t keep = std::max<std::size_t>(n_starts, 1);
    for (long long k = 0; k < cfg.n_trials; ++k) {
      Rng rng = Rng::stream(seed, {static_cast<std::uint64_t>(x0), static_cast<std::uint64_t>(k)});
      const Vec3 prep_dir = sample_unit_sphere(rng);
      const Vec3 a_dir = sample_unit_sphere(rng);
      const Vec3 a_prime_dir = sample_unit_sphere(rng);
      const JointTable t = kernel.table(signed_decomposition(BlochVector::from_polar(cfg.r_norm, prep_dir)),
                                        CoinObservable(a_dir), CoinObservable(a_prime_dir), cfg.tol);
      const BellReport rep = make_report(t);
      if (!rep.accepted()) continue;
      ++res.accepted;
      if (std::abs(rep.S) > 2.0) ++res.accepted_gt2;
      if (top.size() == keep && std::abs(rep.S) <= std::abs(top.back().report.S)) continue;
      WitnessRecord w;
      w.steps = cfg.steps;
      w.prep_dir = prep_dir;
      w.r_norm = cfg.r_norm;
      w.a0 = a_dir;
      w.a1 = a_prime_dir;
      w.walker = BinningSettings{cfg.sign_of_zero, x0};
      w.report = rep;
      w.table = t;
      w.seed = seed;
      w.trial = k;
      top.insert(std::upper_bound(top.begin(), top.end(), w, better_witness), std::move(w));
      if (top.size() > keep) top.pop_back();
    }
    if (top.empty()) return;
    res.best = top.front();
    for (std::size_t s = 0; s < std::min(n_starts, top.size()); ++s) {
      const WitnessRecord polished = refine_witness(top[s], kernel, cfg.tol, cfg.refine_margin);
      if (better_witness(polished, *res.best)) res.best = polished;
    }
  });

  CoarseResult out;
  out.trials = cfg.n_trials * static_cast<long long>(results.size());
  out.per_x0.resize(grid.size());
  out.per_seed.resize(n_seeds);
  for (std::size_t gi = 0; gi < grid.size(); ++gi) out.per_x0[gi].x0 = grid[gi];
  for (std::size_t si = 0; si < n_seeds; ++si) out.per_seed[si].seed = cfg.seeds[si];

  std::vector<std::optional<WitnessRecord>> seed_best(n_seeds);
  std::vector<std::optional<WitnessRecord>> x0_best(grid.size());
  auto keep = [](std::optional<WitnessRecord>& slot, const WitnessRecord& cand) {
    if (!slot || better_witness(cand, *slot)) slot = cand;
  };
  for (std::size_t task = 0; task < results.size(); ++task) {
    const std::size_t si = task / grid.size();
    const std::size_t gi = task % grid.size();
    const TaskResult& r = results[task];
    out.accepted += r.accepted;
    out.accepted_gt2 += r.accepted_gt2;
    out.per_x0[gi].accepted += r.accepted;
    out.per_x0[gi].accepted_gt2 += r.accepted_gt2;
    if (!r.best) continue;
    keep(out.best, *r.best);
    keep(seed_best[si], *r.best);
    keep(x0_best[gi], *r.best);
  }
  for (std::size_t gi = 0; gi < grid.size(); ++gi)
    if (x0_best[gi]) {
      out.per_x0[gi].found = true;
      out.per_x0[gi].best_S = std::abs(x0_best[gi]->report.S);
      out.per_x0[gi].min_p = x0_best[gi]->report.min_p;
    }
  for (std::size_t si = 0; si < n_seeds; ++si)
    if (seed_best[si]) {
      out.per_seed[si].found = true;
      out.per_seed[si].best_S = std::abs(seed_best[si]->report.S);
      out.per_seed[si].min_p = seed_best[si]->report.min_p;
      out.per_seed[si].x0 = threshold_of(*seed_best[si]);
    }
  return out;
}

std::vector<SweepRow> finite_time_sweep(const std::vector<int>& steps_list, double r_norm,
                                        const SearchConfig& per_t) {
  if (steps_list.empty()) throw ConfigError("T_list", "must be nonempty");
  std::vector<SweepRow> rows;
  rows.reserve(steps_list.size());
  for (int steps : steps_list) {
    SearchConfig cfg = per_t;
    cfg.steps = steps;
    cfg.r_norm = r_norm;
    cfg.x0_grid.clear();
    const CoarseResult res = coarse_search(cfg);

    SweepRow row;
    row.steps = steps;
    row.per_seed = res.per_seed;
    row.fraction_gt2 = res.fraction_gt2();
    row.best = res.best;
    std::vector<double> best_values;
    std::vector<double> margins;
    for (const auto& s : res.per_seed) {
      if (!s.found) continue;
      best_values.push_back(s.best_S);
      margins.push_back(s.min_p);
    }
    row.found = res.best.has_value();
    if (row.found) row.best_S = std::abs(res.best->report.S);
    row.median_S = median(best_values);
    row.typical_min_p = median(margins);
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace qwalk
