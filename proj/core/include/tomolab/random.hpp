// Copyright 2026 The tomolab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <complex>
#include <cstdint>
#include <random>

namespace tomolab {

/// A seeded pseudo-random stream. Streams for parallel trials are derived from a
/// master seed with derive(master, index), so stream k never depends on how many
/// other streams exist.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed);

  /// Stream number `index` of the family rooted at `master`:
  /// seed = splitmix64(master ^ splitmix64(index + 1)).
  static RandomStream derive(std::uint64_t master, std::uint64_t index);

  /// Child stream; equivalent to derive(seed(), index).
  RandomStream child(std::uint64_t index) const { return derive(seed_, index); }

  std::uint64_t seed() const noexcept { return seed_; }
  std::mt19937_64& engine() noexcept { return engine_; }

  double uniform();                    // [0, 1)
  double uniform(double lo, double hi);  // [lo, hi)
  double normal();                     // N(0, 1)
  /// Circularly symmetric complex normal with E|z|^2 = 1.
  std::complex<double> complex_normal();

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

std::uint64_t splitmix64(std::uint64_t x) noexcept;

}  // namespace tomolab
