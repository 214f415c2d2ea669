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

#include "commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iostream>
#include <numbers>
#include <string>
#include <vector>

#include "qwalk/emulation.hpp"
#include "qwalk/errors.hpp"
#include "qwalk/io.hpp"
#include "qwalk/search.hpp"

namespace qwalk::cli {

namespace {

namespace fs = std::filesystem;

const double kTsirelson = 2.0 * std::numbers::sqrt2;

// Shared state of one subcommand run: config access, output bookkeeping and
// the manifest written at the end.
class Run {
 public:
  Run(const char* name, const CommonOptions& opts)
      : opts_(opts), reader_(load(opts.config)), start_(std::chrono::steady_clock::now()) {
    manifest_.subcommand = name;
    fs::create_directories(opts.out);
  }

  ConfigReader& config() { return reader_; }

  double tol() {
    double tol = reader_.get<double>("tol", kDefaultTolerance);
    if (opts_.tol) {
      tol = *opts_.tol;
      reader_.record("tol", tol);
    }
    if (!(tol > 0.0)) throw ConfigError("tol", "must be positive");
    manifest_.tol = tol;
    return tol;
  }

  std::uint64_t seed(std::uint64_t fallback) {
    std::uint64_t s = reader_.get<std::uint64_t>("seed", fallback);
    if (opts_.seed_override) {
      s = *opts_.seed_override;
      reader_.record("seed", s);
    }
    manifest_.seeds = {s};
    return s;
  }

  std::vector<std::uint64_t> seeds(const std::vector<std::uint64_t>& fallback) {
    auto s = reader_.get<std::vector<std::uint64_t>>("seeds", fallback);
    if (opts_.seed_override) {
      s = {*opts_.seed_override};
      reader_.record("seeds", s);
    }
    if (s.empty()) throw ConfigError("seeds", "must be nonempty");
    manifest_.seeds = s;
    return s;
  }

  // Resolves a path from the config relative to the config file's directory.
  fs::path input_path(const std::string& key) {
    const std::string value = reader_.get<std::string>(key, "");
    if (value.empty()) throw ConfigError(key, "required");
    fs::path p(value);
    if (p.is_relative() && !opts_.config.empty()) p = opts_.config.parent_path() / p;
    return p;
  }

  fs::path output(const std::string& name) {
    const fs::path p = opts_.out / name;
    manifest_.outputs.push_back(p);
    return p;
  }

  void check(bool ok, const std::string& what) {
    std::cout << (ok ? "  ok    " : "  FAIL  ") << what << '\n';
    if (!ok) manifest_.checks_passed = false;
  }

  int finish() {
    manifest_.config = reader_.resolved();
    manifest_.wall_clock_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    write_json(opts_.out / "manifest.json", manifest_.to_json());
    std::cout << "wrote " << manifest_.outputs.size() << " files and manifest.json to " << opts_.out.string()
              << '\n';
    return manifest_.checks_passed ? kOk : kCheckFailed;
  }

 private:
  static json load(const fs::path& path) { return path.empty() ? json::object() : read_config_file(path); }

  CommonOptions opts_;
  ConfigReader reader_;
  RunManifest manifest_;
  std::chrono::steady_clock::time_point start_;
};

int read_steps(ConfigReader& cfg, int fallback) {
  const int steps = cfg.get<int>("T", fallback);
  if (steps < 0) throw ConfigError("T", "walk time must be nonnegative");
  return steps;
}

double read_r_norm(ConfigReader& cfg, double fallback) {
  const double r = cfg.get<double>("r_norm", fallback);
  if (!std::isfinite(r) || r < 0.0) throw ConfigError("r_norm", "must be finite and nonnegative");
  return r;
}

Vec3 read_direction(ConfigReader& cfg, const std::string& key) {
  const Vec3 v = vec3_from_json(cfg.raw(key), key);
  if (!(v.norm() > 0.0)) throw ConfigError(key, "direction must be nonzero");
  const Vec3 unit = v.normalized();
  cfg.record(key, to_json(unit));
  return unit;
}

// The benchmark coin direction: explicit "direction", else discovered from the
// target Schmidt coefficients.
struct ResolvedDirection {
  Vec3 direction;
  json report;
  bool matched = true;
};

ResolvedDirection resolve_direction(ConfigReader& cfg, int steps) {
  const double t0 = cfg.get<double>("target_s0", 0.843);
  const double t1 = cfg.get<double>("target_s1", 0.538);
  const double match_tol = cfg.get<double>("match_tol", 0.005);
  if (cfg.has("direction")) {
    const Vec3 dir = read_direction(cfg, "direction");
    return {dir, {{"source", "config"}, {"direction", to_json(dir)}}, true};
  }
  BenchmarkDirection found;
  try {
    found = discover_benchmark_direction(steps, {t0, t1}, match_tol);
  } catch (const DomainError& e) {
    throw ConfigError("target_s0", e.what());
  }
  json report = {{"source", "discovered"},
                 {"found", found.found},
                 {"label", found.label},
                 {"direction", to_json(found.direction)},
                 {"target", {t0, t1}},
                 {"match_tol", match_tol},
                 {"deviation", found.deviation},
                 {"s0", found.schmidt.s0},
                 {"s1", found.schmidt.s1}};
  if (!found.found)
    std::cout << "no direction matches the target within " << match_tol << "; closest is " << found.label
              << " (s0 = " << found.schmidt.s0 << ", s1 = " << found.schmidt.s1 << ")\n";
  return {found.direction, report, found.found};
}

std::vector<double> default_r_grid() {
  std::vector<double> g;
  for (int k = 0; k <= 40; ++k) g.push_back(k / 20.0);
  return g;
}

CsvWriter scan_csv(const std::vector<ScanPoint>& points) {
  CsvWriter csv({"r_norm", "best_S", "min_p"});
  for (const auto& p : points)
    csv.row({format_double(p.r_norm), p.found ? format_double(p.best_S) : "", p.found ? format_double(p.min_p) : ""});
  return csv;
}

PositionDistribution<double> witness_positions(const WitnessRecord& w) {
  return position_distribution<double>(as_weighted_states(evolve_ensemble(signed_decomposition(w.prep()), w.steps)));
}

json witness_json(const WitnessRecord& w, double tol) {
  json j = to_json(w);
  j["tol"] = tol;
  return j;
}

SearchConfig read_search_config(Run& run, int default_steps) {
  ConfigReader& cfg = run.config();
  SearchConfig sc;
  sc.steps = read_steps(cfg, default_steps);
  sc.r_norm = read_r_norm(cfg, sc.r_norm);
  sc.n_trials = cfg.get<long long>("n_trials", sc.n_trials);
  sc.x0_grid = cfg.get<std::vector<int>>("x0_grid", {});
  sc.x0_ratios = cfg.get<std::vector<double>>("x0_ratios", {});
  sc.seeds = run.seeds(sc.seeds);
  sc.tol = run.tol();
  sc.sign_of_zero = cfg.get<int>("sign_of_zero", 1);
  sc.refine_starts = cfg.get<int>("refine_starts", sc.refine_starts);
  sc.refine_margin = cfg.get<double>("refine_margin", sc.refine_margin);
  return sc;
}

}  // namespace

int cmd_benchmark(const CommonOptions& opts) {
  Run run("benchmark", opts);
  ConfigReader& cfg = run.config();
  const int steps = read_steps(cfg, 60);
  const double tol = run.tol();
  const double saturation_tol = cfg.get<double>("saturation_tol", 1e-6);
  const double witness_r = cfg.get<double>("witness_r_norm", 1.45);
  const long long n_dirs = cfg.get<long long>("n_dirs", 10000);
  const double margin_floor = cfg.get<double>("margin_floor", -1.0);
  const std::uint64_t seed = run.seed(1);
  if (steps < 1) throw ConfigError("T", "benchmark needs at least one step");
  if (n_dirs < 1) throw ConfigError("n_dirs", "must be at least 1");
  const ResolvedDirection dir = resolve_direction(cfg, steps);
  cfg.finish();

  const Benchmark bench = make_benchmark(steps, dir.direction);
  const double residual = bench.schmidt.reconstruction_residual(bench.state);
  std::cout << "benchmark T=" << steps << ": s0 = " << bench.schmidt.s0 << ", s1 = " << bench.schmidt.s1
            << ", S_max = " << bench.s_max << ", achieved = " << bench.settings.achieved << '\n';

  ScanOptions so;
  so.n_dirs = n_dirs;
  so.seed = seed;
  so.tol = tol;
  so.margin_floor = margin_floor;
  const auto points = benchmark_scan_r(bench, {witness_r}, so);

  json out = {{"T", steps},
              {"direction", dir.report},
              {"schmidt", to_json(bench.schmidt)},
              {"reconstruction_residual", residual},
              {"S_max", bench.s_max},
              {"S_achieved", bench.settings.achieved},
              {"settings_refined", bench.settings.refined},
              {"a0", to_json(bench.settings.a0.direction)},
              {"a1", to_json(bench.settings.a1.direction)},
              {"walker", to_json(WalkerSettings(schmidt_settings_of(bench)))}};
  run.check(dir.matched, "benchmark direction matches the target coefficients");
  run.check(std::abs(bench.settings.achieved - bench.s_max) <= saturation_tol, "optimal settings saturate S_max");
  run.check(residual <= 1e-10, "Schmidt reconstruction residual");

  const ScanPoint& pt = points.front();
  if (pt.found) {
    const WitnessRecord& w = *pt.witness;
    out["witness"] = witness_json(w, tol);
    position_csv(witness_positions(w)).write(run.output("benchmark_position_distribution.csv"));
    std::cout << "witness at |r| = " << witness_r << ": |S| = " << pt.best_S << ", min_p = " << pt.min_p << '\n';
  } else {
    out["witness"] = nullptr;
    std::cout << "no admissible witness at |r| = " << witness_r << '\n';
  }
  write_json(run.output("benchmark.json"), out);
  return run.finish();
}

int cmd_scan_r(const CommonOptions& opts) {
  Run run("scan-r", opts);
  ConfigReader& cfg = run.config();
  const int steps = read_steps(cfg, 60);
  const double tol = run.tol();
  const std::vector<double> grid = cfg.get<std::vector<double>>("r_grid", default_r_grid());
  const long long n_dirs = cfg.get<long long>("n_dirs", 10000);
  const double margin_floor = cfg.get<double>("margin_floor", -1.0);
  const std::uint64_t seed = run.seed(1);
  if (steps < 1) throw ConfigError("T", "scan needs at least one step");
  if (grid.empty()) throw ConfigError("r_grid", "must be nonempty");
  for (double r : grid)
    if (!std::isfinite(r) || r < 0.0) throw ConfigError("r_grid", "entries must be finite and nonnegative");
  if (n_dirs < 1) throw ConfigError("n_dirs", "must be at least 1");
  const ResolvedDirection dir = resolve_direction(cfg, steps);
  cfg.finish();

  const Benchmark bench = make_benchmark(steps, dir.direction);
  ScanOptions so;
  so.n_dirs = n_dirs;
  so.seed = seed;
  so.tol = tol;
  so.margin_floor = margin_floor;
  const auto points = benchmark_scan_r(bench, grid, so);

  scan_csv(points).write(run.output("chsh_vs_r.csv"));
  scan_csv(points).write(run.output("min_p_vs_r.csv"));
  CsvWriter refs({"name", "S"});
  refs.row({"classical", format_double(2.0)});
  refs.row({"tsirelson", format_double(kTsirelson)});
  refs.row({"algebraic", format_double(4.0)});
  refs.row({"benchmark_S_max", format_double(bench.s_max)});
  refs.write(run.output("reference_lines.csv"));

  bool floor_ok = true;
  bool quantum_ok = true;
  json witnesses = json::array();
  for (const auto& p : points) {
    std::cout << "|r| = " << format_double(p.r_norm) << ": "
              << (p.found ? "|S| = " + format_double(p.best_S) + ", min_p = " + format_double(p.min_p)
                          : std::string("no admissible direction"))
              << '\n';
    if (!p.found) continue;
    floor_ok = floor_ok && p.min_p >= -tol;
    if (p.r_norm <= 1.0) quantum_ok = quantum_ok && p.best_S <= kTsirelson + 1e-9;
    witnesses.push_back(witness_json(*p.witness, tol));
  }
  write_json(run.output("scan_r_witnesses.json"),
             {{"T", steps}, {"direction", dir.report}, {"S_max", bench.s_max}, {"witnesses", witnesses}});
  run.check(floor_ok, "all reported points have min_p >= -tol");
  run.check(quantum_ok, "points with |r| <= 1 stay below 2 sqrt 2");
  return run.finish();
}

int cmd_coarse(const CommonOptions& opts) {
  Run run("coarse", opts);
  SearchConfig sc = read_search_config(run, 60);
  run.config().finish();
  sc.validate();

  const CoarseResult res = coarse_search(sc);
  std::cout << "coarse search: " << res.trials << " trials, " << res.accepted << " accepted\n";

  CsvWriter x0_csv({"x0", "x0_over_T", "found", "best_S", "min_p", "accepted", "accepted_gt2"});
  for (const auto& row : res.per_x0)
    x0_csv.row({std::to_string(row.x0), format_double(sc.steps > 0 ? double(row.x0) / sc.steps : 0.0),
                row.found ? "1" : "0", row.found ? format_double(row.best_S) : "",
                row.found ? format_double(row.min_p) : "", std::to_string(row.accepted),
                std::to_string(row.accepted_gt2)});
  x0_csv.write(run.output("coarse_x0_scan.csv"));
  CsvWriter seed_csv({"seed", "found", "best_S", "min_p", "x0"});
  for (const auto& s : res.per_seed)
    seed_csv.row({std::to_string(s.seed), s.found ? "1" : "0", s.found ? format_double(s.best_S) : "",
                  s.found ? format_double(s.min_p) : "", s.found ? std::to_string(s.x0) : ""});
  seed_csv.write(run.output("coarse_seeds.csv"));

  json summary = {{"trials", res.trials},
                  {"accepted", res.accepted},
                  {"accepted_gt2", res.accepted_gt2},
                  {"fraction_gt2", res.fraction_gt2()},
                  {"found", res.best.has_value()}};
  if (res.best) {
    const WitnessRecord& w = *res.best;
    summary["witness"] = witness_json(w, sc.tol);
    table_csv(w.table).write(run.output("coarse_joint_table.csv"));
    position_csv(witness_positions(w)).write(run.output("coarse_position_distribution.csv"));
    std::cout << "best |S| = " << format_double(std::abs(w.report.S)) << " (min_p = " << format_double(w.report.min_p)
              << ", seed " << w.seed << ", trial " << w.trial << ", x0 = " << std::get<BinningSettings>(w.walker).x0
              << ")\n";
    const auto again = reevaluate(w, sc.tol / 10.0);
    run.check(again.report.accepted(), "best witness passes at 10x tighter tolerance");
    if (sc.r_norm <= 1.0) run.check(std::abs(w.report.S) <= kTsirelson + 1e-9, "quantum ceiling");
  } else {
    std::cout << "no trial was accepted\n";
  }
  write_json(run.output("coarse_witness.json"), summary);
  return run.finish();
}

int cmd_finite_time(const CommonOptions& opts) {
  Run run("finite-time", opts);
  ConfigReader& cfg = run.config();
  const std::vector<int> t_list = cfg.get<std::vector<int>>("T_list", {2, 4, 6, 8, 10});
  SearchConfig sc = read_search_config(run, 0);
  cfg.finish();
  if (t_list.empty()) throw ConfigError("T_list", "must be nonempty");
  for (int t : t_list)
    if (t < 1) throw ConfigError("T_list", "walk times must be at least 1");
  if (!sc.x0_grid.empty()) throw ConfigError("x0_grid", "not used by finite-time; give x0_ratios instead");
  for (int t : t_list) {
    SearchConfig per_t = sc;
    per_t.steps = t;
    per_t.validate();
  }

  const auto rows = finite_time_sweep(t_list, sc.r_norm, sc);
  CsvWriter best_csv({"T", "best_S", "median_S"});
  CsvWriter per_seed({"T", "seed", "best_S", "min_p", "x0"});
  CsvWriter fraction_csv({"T", "fraction_gt2"});
  CsvWriter margin_csv({"T", "typical_min_p", "best_min_p"});
  json witnesses = json::array();
  bool fractions_ok = true;
  bool reeval_ok = true;
  for (const auto& row : rows) {
    const std::string t = std::to_string(row.steps);
    best_csv.row({t, row.found ? format_double(row.best_S) : "", row.found ? format_double(row.median_S) : ""});
    for (const auto& s : row.per_seed)
      per_seed.row({t, std::to_string(s.seed), s.found ? format_double(s.best_S) : "",
                      s.found ? format_double(s.min_p) : "", s.found ? std::to_string(s.x0) : ""});
    fraction_csv.row({t, format_double(row.fraction_gt2)});
    margin_csv.row({t, row.found ? format_double(row.typical_min_p) : "",
              row.found ? format_double(row.best->report.min_p) : ""});
    fractions_ok = fractions_ok && row.fraction_gt2 >= 0.0 && row.fraction_gt2 <= 1.0;
    std::cout << "T = " << row.steps << ": best |S| = " << (row.found ? format_double(row.best_S) : "none")
              << ", median = " << format_double(row.median_S) << ", fraction > 2 = " << format_double(row.fraction_gt2)
              << '\n';
    if (row.best) {
      witnesses.push_back(witness_json(*row.best, sc.tol));
      reeval_ok = reeval_ok && reevaluate(*row.best, sc.tol / 10.0).report.accepted();
    }
  }
  best_csv.write(run.output("finite_time_best_S.csv"));
  per_seed.write(run.output("finite_time_per_seed.csv"));
  fraction_csv.write(run.output("finite_time_fraction_gt2.csv"));
  margin_csv.write(run.output("finite_time_min_p.csv"));
  write_json(run.output("finite_time_witnesses.json"), {{"r_norm", sc.r_norm}, {"witnesses", witnesses}});
  run.check(fractions_ok, "fractions lie in [0, 1]");
  run.check(reeval_ok, "best witnesses pass at 10x tighter tolerance");
  return run.finish();
}

int cmd_emulate(const CommonOptions& opts) {
  Run run("emulate", opts);
  ConfigReader& cfg = run.config();
  const fs::path witness_path = run.input_path("witness_file");
  const std::vector<long long> budgets =
      cfg.get<std::vector<long long>>("budgets", {1000, 3000, 10000, 30000, 100000});
  const int repetitions = cfg.get<int>("repetitions", 200);
  const long long closure_shots = cfg.get<long long>("closure_shots", 1000000);
  const double reference_r = cfg.get<double>("reference_r_norm", 1.0);
  const double tol = run.tol();
  const std::uint64_t seed = run.seed(1);
  cfg.finish();
  if (budgets.size() < 2) throw ConfigError("budgets", "need at least two budgets");
  for (long long b : budgets)
    if (b < 2) throw ConfigError("budgets", "each budget must be at least 2 shots");
  if (repetitions < 2) throw ConfigError("repetitions", "must be at least 2");
  if (closure_shots < 2) throw ConfigError("closure_shots", "must be at least 2");

  json stored;
  try {
    stored = read_config_file(witness_path);
  } catch (const ConfigError& e) {
    throw ConfigError("witness_file", e.what());
  }
  // Accept either a bare record or a subcommand output that embeds one.
  const json& record_json = stored.contains("witness") ? stored.at("witness") : stored;
  if (record_json.is_null()) throw ConfigError("witness_file", "file holds no witness");
  const WitnessRecord w = witness_from_json(record_json);

  const BranchTables br = witness_branch_tables(w, tol);
  const JointTable exact = combine_tables(br.weights.first, br.plus, br.weights.second, br.minus);
  const EmulationResult closure =
      emulate_shots(br.plus, br.minus, br.weights, allocate_shots(br.weights, closure_shots), seed);
  const double closure_dev = std::abs(closure.S - exact.chsh());
  std::cout << "closure: exact S = " << format_double(exact.chsh()) << ", emulated S = " << format_double(closure.S)
            << " +- " << format_double(closure.S_std_error) << '\n';

  WitnessRecord ref = w;
  ref.r_norm = reference_r;
  const BranchTables ref_br = witness_branch_tables(ref, tol);
  const auto study = shot_noise_study(br.plus, br.minus, br.weights, budgets, repetitions, seed);
  const auto ref_study = shot_noise_study(ref_br.plus, ref_br.minus, ref_br.weights, budgets, repetitions, seed);
  const double slope = log_log_slope(study);
  double ratio_sum = 0.0;
  CsvWriter csv({"total_shots", "r_norm", "mean_S", "variance_S", "nominal"});
  for (std::size_t g = 0; g < budgets.size(); ++g) {
    csv.row_numbers({double(study[g].total_shots), w.r_norm, study[g].mean_S, study[g].variance_S, study[g].nominal});
    csv.row_numbers({double(ref_study[g].total_shots), reference_r, ref_study[g].mean_S, ref_study[g].variance_S,
                     ref_study[g].nominal});
    ratio_sum += study[g].variance_S / ref_study[g].variance_S;
  }
  const double ratio = ratio_sum / static_cast<double>(budgets.size());
  const double expected_ratio = std::pow(std::max(w.r_norm, 1.0), 2) / std::pow(std::max(reference_r, 1.0), 2);
  csv.write(run.output("variance_vs_shots.csv"));
  table_csv(closure.table).write(run.output("emulated_joint_table.csv"));
  write_json(run.output("emulation_summary.json"),
             {{"exact_S", exact.chsh()},
              {"emulated_S", closure.S},
              {"S_std_error", closure.S_std_error},
              {"shots", {closure.shots.plus, closure.shots.minus}},
              {"weights", {br.weights.first, br.weights.second}},
              {"slope", slope},
              {"variance_ratio", ratio},
              {"expected_variance_ratio", expected_ratio},
              {"reference_r_norm", reference_r}});
  std::cout << "log-log slope = " << format_double(slope) << ", variance ratio = " << format_double(ratio)
            << " (expected " << format_double(expected_ratio) << ")\n";

  run.check(closure_dev <= 3.0 * closure.S_std_error, "emulated S within 3 standard errors of the exact value");
  run.check(std::abs(slope + 1.0) <= 0.1, "shot-noise slope -1 +- 0.1");
  run.check(std::abs(ratio / expected_ratio - 1.0) <= 0.25, "variance ratio within 25% of the N^2 ratio");
  return run.finish();
}

}  // namespace qwalk::cli
