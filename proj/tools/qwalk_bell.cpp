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

#include <CLI11.hpp>

#include <cstdint>
#include <exception>
#include <functional>
#include <iostream>
#include <string>

#include "commands.hpp"
#include "qwalk/errors.hpp"
#include "qwalk/io.hpp"

namespace {

using qwalk::cli::CommonOptions;

struct Flags {
  std::string config;
  std::string out = ".";
  std::uint64_t seed = 0;
  double tol = 0.0;
  CLI::Option* seed_opt = nullptr;
  CLI::Option* tol_opt = nullptr;

  CommonOptions resolve() const {
    CommonOptions o;
    o.config = config;
    o.out = out;
    if (seed_opt->count() > 0) o.seed_override = seed;
    if (tol_opt->count() > 0) o.tol = tol;
    return o;
  }
};

void add_flags(CLI::App* sub, Flags& f) {
  sub->add_option("--config", f.config, "JSON config file (defaults apply to missing fields)");
  sub->add_option("--out", f.out, "Output directory")->capture_default_str();
  f.seed_opt = sub->add_option("--seed-override", f.seed, "Replace the configured seed(s) with this one");
  f.tol_opt = sub->add_option("--tol", f.tol, "Verification tolerance")->check(CLI::PositiveNumber);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bell tests on coined Hadamard walks with extended coin preparations", "qwalk-bell"};
  app.set_version_flag("--version", qwalk::library_version());
  app.require_subcommand(1);

  struct Entry {
    const char* name;
    const char* help;
    int (*run)(const CommonOptions&);
  };
  const Entry entries[] = {
      {"benchmark", "Schmidt benchmark, optimal settings and saturation check", qwalk::cli::cmd_benchmark},
      {"scan-r", "Schmidt-aligned CHSH scan over the Bloch magnitude", qwalk::cli::cmd_scan_r},
      {"coarse", "Coarse-grained randomized witness search", qwalk::cli::cmd_coarse},
      {"finite-time", "Coarse-grained search over a list of walk times", qwalk::cli::cmd_finite_time},
      {"emulate", "Shot-noise emulation of a stored witness", qwalk::cli::cmd_emulate},
  };
  Flags flags[std::size(entries)];
  CLI::App* subs[std::size(entries)];
  for (std::size_t k = 0; k < std::size(entries); ++k) {
    subs[k] = app.add_subcommand(entries[k].name, entries[k].help);
    add_flags(subs[k], flags[k]);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : qwalk::cli::kConfigError;
  }

  for (std::size_t k = 0; k < std::size(entries); ++k) {
    if (!subs[k]->parsed()) continue;
    try {
      return entries[k].run(flags[k].resolve());
    } catch (const qwalk::ConfigError& e) {
      std::cerr << "config error: " << e.what() << '\n';
      return qwalk::cli::kConfigError;
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << '\n';
      return qwalk::cli::kRuntimeError;
    }
  }
  return qwalk::cli::kConfigError;
}
