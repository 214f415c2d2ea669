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
#include <filesystem>
#include <optional>

namespace qwalk::cli {

// Flags shared by every subcommand.
struct CommonOptions {
  std::filesystem::path config;  // empty: all defaults
  std::filesystem::path out = ".";
  std::optional<std::uint64_t> seed_override;
  std::optional<double> tol;
};

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kCheckFailed = 1;
inline constexpr int kConfigError = 2;
inline constexpr int kRuntimeError = 3;

int cmd_benchmark(const CommonOptions& opts);
int cmd_scan_r(const CommonOptions& opts);
int cmd_coarse(const CommonOptions& opts);
int cmd_finite_time(const CommonOptions& opts);
int cmd_emulate(const CommonOptions& opts);

}  // namespace qwalk::cli
