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

#include "tomolab/random.hpp"

#include <cmath>
#include <numbers>

namespace tomolab {

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

RandomStream::RandomStream(std::uint64_t seed) : seed_(seed), engine_(seed) {}

RandomStream RandomStream::derive(std::uint64_t master, std::uint64_t index) {
  return RandomStream(splitmix64(master ^ splitmix64(index + 1)));
}

double RandomStream::uniform() { return uniform_(engine_); }

double RandomStream::uniform(double lo, double hi) { return lo + (hi - lo) * uniform_(engine_); }

double RandomStream::normal() { return normal_(engine_); }

std::complex<double> RandomStream::complex_normal() {
  const double re = normal_(engine_);
  const double im = normal_(engine_);
  constexpr double kScale = 1.0 / std::numbers::sqrt2;
  return {re * kScale, im * kScale};
}

}  // namespace tomolab
