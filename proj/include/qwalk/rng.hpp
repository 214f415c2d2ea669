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
#include <initializer_list>
#include <optional>
#include <random>

#include "qwalk/types.hpp"

namespace qwalk {

// Portable random source: std::mt19937_64 (bit-exact by the standard) with
// hand-written uniform and Box-Muller transforms, since the standard library
// distributions differ between implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Independent stream for (seed, k1, k2, ...): the keys are folded through
  // splitmix64 and the result seeds a fresh engine.
  static Rng stream(std::uint64_t seed, std::initializer_list<std::uint64_t> keys);

  std::uint64_t next() { return engine_(); }
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }  // [0, 1)
  double normal();

 private:
  std::mt19937_64 engine_;
  std::optional<double> spare_;
};

std::uint64_t splitmix64(std::uint64_t x);

// Uniform on S^2 by normalizing three standard normals (norms below 1e-6 redrawn).
Vec3 sample_unit_sphere(Rng& rng);

}  // namespace qwalk
