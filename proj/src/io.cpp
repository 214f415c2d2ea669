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

#include "qwalk/io.hpp"

#include <openssl/evp.h>

#include <array>
#include <charconv>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "qwalk/errors.hpp"

#ifndef QWALK_VERSION
#define QWALK_VERSION "0.0.0"
#endif

namespace qwalk {

const char* library_version() { return QWALK_VERSION; }

std::string format_double(double v) {
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v, std::chars_format::general, 17);
  return std::string(buf.data(), res.ptr);
}

json to_json(const Vec3& v) { return json::array({v.x(), v.y(), v.z()}); }

json to_json(const Matrix2c& m) {
  json re = json::array();
  json im = json::array();
  for (int r = 0; r < 2; ++r) {
    re.push_back({m(r, 0).real(), m(r, 1).real()});
    im.push_back({m(r, 0).imag(), m(r, 1).imag()});
  }
  return {{"re", re}, {"im", im}};
}

namespace {

json complex_vector(const Eigen::Ref<const VectorXc>& v) {
  json re = json::array();
  json im = json::array();
  for (Eigen::Index k = 0; k < v.size(); ++k) {
    re.push_back(v(k).real());
    im.push_back(v(k).imag());
  }
  return {{"re", re}, {"im", im}};
}

Matrix2c matrix2_from_json(const json& j, const std::string& field) {
  try {
    Matrix2c m;
    for (int r = 0; r < 2; ++r)
      for (int c = 0; c < 2; ++c)
        m(r, c) = Complex(j.at("re").at(r).at(c).get<double>(), j.at("im").at(r).at(c).get<double>());
    return m;
  } catch (const json::exception& e) {
    throw ConfigError(field, std::string("expected a 2x2 complex matrix {re, im}: ") + e.what());
  }
}

std::string outcome_label(int v) { return v == 1 ? "+1" : "-1"; }

}  // namespace

json to_json(const SchmidtData& sd) {
  return {{"T", sd.t_max},
          {"s0", sd.s0},
          {"s1", sd.s1},
          {"degenerate", sd.degenerate},
          {"coin_vectors", {complex_vector(sd.u0), complex_vector(sd.u1)}},
          {"walker_vectors", {complex_vector(sd.b0), complex_vector(sd.b1)}}};
}

json to_json(const JointTable& t) {
  json entries = json::array();
  for (int a : {1, -1})
    for (int b : {1, -1})
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) entries.push_back({{"a", a}, {"b", b}, {"i", i}, {"j", j}, {"p", t.at(a, b, i, j)}});
  return {{"tol", t.tol}, {"entries", entries}};
}

JointTable table_from_json(const json& j) {
  JointTable t;
  try {
    t.tol = j.value("tol", kDefaultTolerance);
    for (const auto& e : j.at("entries"))
      t.at(e.at("a").get<int>(), e.at("b").get<int>(), e.at("i").get<int>(), e.at("j").get<int>()) =
          e.at("p").get<double>();
  } catch (const json::exception& e) {
    throw ConfigError("table", e.what());
  }
  return t;
}

json to_json(const BellReport& r) {
  return {{"E00", r.E[0][0]},          {"E01", r.E[0][1]},
          {"E10", r.E[1][0]},          {"E11", r.E[1][1]},
          {"S", r.S},                  {"abs_S", std::abs(r.S)},
          {"min_p", r.min_p},          {"ns_deviation", r.ns_deviation},
          {"normalization_error", r.normalization_error},
          {"admissible", r.admissible}, {"no_signaling", r.no_signaling}};
}

json to_json(const SignedEnsemble& e) {
  json out = json::array();
  for (const auto& m : e.members)
    out.push_back({{"weight", m.weight},
                   {"amp0_re", m.coin(0).real()},
                   {"amp0_im", m.coin(0).imag()},
                   {"amp1_re", m.coin(1).real()},
                   {"amp1_im", m.coin(1).imag()}});
  return out;
}

SignedEnsemble ensemble_from_json(const json& j) {
  SignedEnsemble e;
  try {
    for (const auto& m : j)
      e.members.push_back({m.at("weight").get<double>(),
                           CoinVector(Complex(m.at("amp0_re").get<double>(), m.at("amp0_im").get<double>()),
                                      Complex(m.at("amp1_re").get<double>(), m.at("amp1_im").get<double>()))});
  } catch (const json::exception& ex) {
    throw ConfigError("ensemble", ex.what());
  }
  return e;
}

json to_json(const WalkerSettings& w) {
  if (const auto* bin = std::get_if<BinningSettings>(&w))
    return {{"kind", "binning"}, {"B0", "sign"}, {"sign_of_zero", bin->sign_of_zero}, {"B1", "threshold"},
            {"x0", bin->x0}};
  const auto& sch = std::get<SchmidtSettings>(w);
  return {{"kind", "schmidt"},
          {"benchmark_dir", to_json(sch.benchmark_dir)},
          {"B0_subspace", to_json(sch.sub0)},
          {"B1_subspace", to_json(sch.sub1)}};
}

Vec3 vec3_from_json(const json& j, const std::string& field) {
  if (!j.is_array() || j.size() != 3) throw ConfigError(field, "expected an array of three numbers");
  try {
    return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
  } catch (const json::exception& e) {
    throw ConfigError(field, e.what());
  }
}

json to_json(const WitnessRecord& w) {
  const double norm = w.r_norm;
  json walker = to_json(w.walker);
  if (const auto* bin = std::get_if<BinningSettings>(&w.walker))
    walker["x0_over_T"] = w.steps > 0 ? static_cast<double>(bin->x0) / w.steps : 0.0;
  return {{"T", w.steps},
          {"r_norm", norm},
          {"prep_dir", to_json(w.prep_dir)},
          {"weights", {(1.0 + norm) / 2.0, 1.0 - (1.0 + norm) / 2.0}},
          {"a0", to_json(w.a0)},
          {"a1", to_json(w.a1)},
          {"walker", walker},
          {"report", to_json(w.report)},
          {"table", to_json(w.table)},
          {"seed", w.seed},
          {"trial", w.trial},
          {"refined", w.refined}};
}

WitnessRecord witness_from_json(const json& j) {
  WitnessRecord w;
  try {
    w.steps = j.at("T").get<int>();
    w.r_norm = j.at("r_norm").get<double>();
    w.prep_dir = vec3_from_json(j.at("prep_dir"), "prep_dir");
    w.a0 = vec3_from_json(j.at("a0"), "a0");
    w.a1 = vec3_from_json(j.at("a1"), "a1");
    const json& walker = j.at("walker");
    const std::string kind = walker.at("kind").get<std::string>();
    if (kind == "binning") {
      w.walker = BinningSettings{walker.at("sign_of_zero").get<int>(), walker.at("x0").get<int>()};
    } else if (kind == "schmidt") {
      w.walker = SchmidtSettings{vec3_from_json(walker.at("benchmark_dir"), "walker.benchmark_dir"),
                                 matrix2_from_json(walker.at("B0_subspace"), "walker.B0_subspace"),
                                 matrix2_from_json(walker.at("B1_subspace"), "walker.B1_subspace")};
    } else {
      throw ConfigError("walker.kind", "expected \"binning\" or \"schmidt\"");
    }
    w.seed = j.value("seed", std::uint64_t{0});
    w.trial = j.value("trial", std::int64_t{0});
    w.refined = j.value("refined", false);
    if (j.contains("table")) {
      w.table = table_from_json(j.at("table"));
      w.report = make_report(w.table);
    }
  } catch (const json::exception& e) {
    throw ConfigError("witness", e.what());
  }
  return w;
}

void CsvWriter::row(const std::vector<std::string>& cells) { rows_.push_back(cells); }

void CsvWriter::row_numbers(const std::vector<double>& values) {
  std::vector<std::string> cells;
  cells.reserve(values.size());
  for (double v : values) cells.push_back(format_double(v));
  rows_.push_back(std::move(cells));
}

std::string CsvWriter::str() const {
  std::string out;
  auto line = [&out](const std::vector<std::string>& cells) {
    for (std::size_t k = 0; k < cells.size(); ++k) {
      if (k > 0) out += ',';
      out += cells[k];
    }
    out += '\n';
  };
  line(header_);
  for (const auto& r : rows_) line(r);
  return out;
}

void CsvWriter::write(const std::filesystem::path& path) const {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot open " + path.string() + " for writing");
  f << str();
}

CsvWriter table_csv(const JointTable& t) {
  CsvWriter csv({"a", "b", "i", "j", "p"});
  for (int a : {1, -1})
    for (int b : {1, -1})
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
          csv.row({outcome_label(a), outcome_label(b), std::to_string(i), std::to_string(j),
                   format_double(t.at(a, b, i, j))});
  return csv;
}

CsvWriter position_csv(const PositionDistribution<double>& dist) {
  CsvWriter csv({"x", "P"});
  for (int x = -dist.t_max; x <= dist.t_max; ++x) csv.row({std::to_string(x), format_double(dist.at(x))});
  return csv;
}

void write_json(const std::filesystem::path& path, const json& j) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot open " + path.string() + " for writing");
  f << j.dump(2) << '\n';
}

std::string sha256_hex(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error("cannot read " + path.string());
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), &EVP_MD_CTX_free);
  EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr);
  std::array<char, 1 << 14> buf{};
  while (f) {
    f.read(buf.data(), buf.size());
    EVP_DigestUpdate(ctx.get(), buf.data(), static_cast<std::size_t>(f.gcount()));
  }
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx.get(), digest.data(), &len);
  std::ostringstream hex;
  for (unsigned int k = 0; k < len; ++k) hex << std::hex << std::setw(2) << std::setfill('0') << int(digest[k]);
  return hex.str();
}

json read_config_file(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ConfigError("", "cannot open config file " + path.string());
  std::stringstream ss;
  ss << f.rdbuf();
  const std::string text = ss.str();
  try {
    json j = json::parse(text);
    if (!j.is_object()) throw ConfigError("", "config must be a JSON object");
    return j;
  } catch (const json::parse_error& e) {
    std::size_t line = 1, column = 1;
    for (std::size_t k = 0; k + 1 < e.byte && k < text.size(); ++k) {
      if (text[k] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    throw ConfigError("", path.string() + ":" + std::to_string(line) + ":" + std::to_string(column) +
                              ": syntax error: " + e.what());
  }
}

ConfigReader::ConfigReader(json config) : config_(std::move(config)) {
  if (!config_.is_object()) throw ConfigError("", "config must be a JSON object");
}

void ConfigReader::finish() const {
  for (const auto& [key, value] : config_.items())
    if (!used_.count(key)) throw ConfigError(key, "unknown config field");
}

json RunManifest::to_json() const {
  json files = json::array();
  for (const auto& p : outputs) files.push_back({{"file", p.filename().string()}, {"sha256", sha256_hex(p)}});
  return {{"subcommand", subcommand},
          {"config", config},
          {"seeds", seeds},
          {"tol", tol},
          {"version", library_version()},
          {"wall_clock_seconds", wall_clock_seconds},
          {"checks_passed", checks_passed},
          {"outputs", files}};
}

}  // namespace qwalk
