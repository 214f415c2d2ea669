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

#include <filesystem>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"

#include "qwalk/bell.hpp"
#include "qwalk/emulation.hpp"
#include "qwalk/schmidt.hpp"
#include "qwalk/search.hpp"

namespace qwalk {

using nlohmann::json;

// 17 significant digits, independent of the C locale.
std::string format_double(double v);

json to_json(const Vec3& v);
json to_json(const Matrix2c& m);
json to_json(const SchmidtData& sd);
json to_json(const JointTable& t);
json to_json(const BellReport& r);
json to_json(const SignedEnsemble& e);
json to_json(const WalkerSettings& w);
json to_json(const WitnessRecord& w);

Vec3 vec3_from_json(const json& j, const std::string& field);
SignedEnsemble ensemble_from_json(const json& j);
JointTable table_from_json(const json& j);
WitnessRecord witness_from_json(const json& j);

// Plain CSV with a header row; numbers through format_double.
class CsvWriter {
 public:
  explicit CsvWriter(std::vector<std::string> header) : header_(std::move(header)) {}
  void row(const std::vector<std::string>& cells);
  void row_numbers(const std::vector<double>& values);
  std::string str() const;
  void write(const std::filesystem::path& path) const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

CsvWriter table_csv(const JointTable& t);  // a,b,i,j,p
CsvWriter position_csv(const PositionDistribution<double>& dist);  // x,P

void write_json(const std::filesystem::path& path, const json& j);
std::string sha256_hex(const std::filesystem::path& path);

// Parses a JSON config, reporting syntax errors by line and column.
json read_config_file(const std::filesystem::path& path);

// Typed access to a flat JSON config object. Every key read is recorded;
// finish() rejects keys that were never read.
class ConfigReader {
 public:
  explicit ConfigReader(json config);

  template <typename T>
  T get(const std::string& key, T fallback) {
    used_.insert(key);
    if (!config_.contains(key)) {
      resolved_[key] = fallback;
      return fallback;
    }
    try {
      T v = config_.at(key).get<T>();
      resolved_[key] = v;
      return v;
    } catch (const json::exception& e) {
      throw ConfigError(key, std::string("wrong type (") + e.what() + ")");
    }
  }

  bool has(const std::string& key) const { return config_.contains(key); }
  const json& raw(const std::string& key) {
    used_.insert(key);
    return config_.at(key);
  }
  void record(const std::string& key, json value) { resolved_[key] = std::move(value); }
  void finish() const;
  const json& resolved() const { return resolved_; }

 private:
  json config_;
  json resolved_ = json::object();
  std::set<std::string> used_;
};

struct RunManifest {
  std::string subcommand;
  json config;
  std::vector<std::uint64_t> seeds;
  double tol = kDefaultTolerance;
  double wall_clock_seconds = 0.0;
  std::vector<std::filesystem::path> outputs;
  bool checks_passed = true;

  json to_json() const;  // includes sha256 digests of the outputs
};

const char* library_version();

}  // namespace qwalk
