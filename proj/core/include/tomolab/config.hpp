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

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "tomolab/ensembles.hpp"
#include "tomolab/linalg.hpp"
#include "tomolab/reconstruct.hpp"

namespace tomolab {

enum class EnsembleKind { haar, fixed_haar, diagonal, kicked_top };

/// Everything an experiment needs. Serialized as flat `key = value` lines; the
/// keys are exactly the field names below.
struct ExperimentConfig {
  Index dim = 7;
  std::optional<std::size_t> steps;  // unset: 6 d^2
  double sigma = 1.0;
  std::optional<double> epsilon;     // unset: d^2
  std::size_t trials = 10;
  EnsembleKind ensemble = EnsembleKind::diagonal;
  double k0 = 7.0;                   // kicked-top ensemble strength
  double k0_regular = 0.5;           // kicked-top command, regular case
  double k0_chaotic = 7.0;           // kicked-top command, chaotic case
  FrameChoice frame = FrameChoice::random;
  InitialObservable observable = InitialObservable::jx;
  StateFamily state = StateFamily::haar_pure;
  std::size_t stride = 0;            // 0: max(1, steps / 200)
  std::uint64_t seed = 1;
  std::string out = "tomolab_out";
  bool plots = false;

  std::size_t resolved_steps() const { return steps.value_or(static_cast<std::size_t>(6 * dim * dim)); }
  double resolved_epsilon() const { return epsilon.value_or(static_cast<double>(dim * dim)); }
};

/// Throws ConfigError naming the offending field.
void validate(const ExperimentConfig& config);

/// Applies one `key`/`value` pair; unknown keys and malformed values throw ConfigError.
void apply_setting(ExperimentConfig& config, std::string_view key, std::string_view value);

/// Parses `key = value` lines; '#' starts a comment. Duplicate keys are errors.
ExperimentConfig parse_config(std::string_view text, ExperimentConfig base = {});
ExperimentConfig load_config(const std::filesystem::path& path, ExperimentConfig base = {});

/// Every key, one per line, in a fixed order; parse_config(serialize(c)) == c.
std::string serialize(const ExperimentConfig& config);

bool operator==(const ExperimentConfig& a, const ExperimentConfig& b);

std::string to_string(EnsembleKind kind);
std::string to_string(FrameChoice frame);
std::string to_string(InitialObservable observable);
std::string to_string(StateFamily state);

/// Shortest decimal text that reads back to the same double.
std::string format_double(double value);

/// Unitary-process policy for the configured ensemble; the kicked top uses j = (dim - 1) / 2.
ProcessPolicy make_policy(const ExperimentConfig& config);

}  // namespace tomolab
