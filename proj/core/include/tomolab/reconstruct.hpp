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

#include <cstddef>
#include <vector>

#include "tomolab/ensembles.hpp"
#include "tomolab/infometrics.hpp"
#include "tomolab/qcore.hpp"
#include "tomolab/random.hpp"
#include "tomolab/tomograph.hpp"

namespace tomolab {

enum class StateFamily { haar_pure, hs_mixed };

/// `rotated` is W^dagger Jz W with a Haar-random W drawn per trial.
enum class InitialObservable { jx, jz, basis_element, rotated };

struct ReconstructionConfig {
  Index dim = 0;
  ProcessPolicy policy = policy::HaarPerStep{};
  InitialObservable observable = InitialObservable::jx;
  Index basis_index = 0;  // used by InitialObservable::basis_element
  std::size_t steps = 0;
  double sigma = 1.0;
  double epsilon = 0.0;
  StateFamily state = StateFamily::haar_pure;
  /// Explicit checkpoint steps; when empty, checkpoint_steps(steps, stride) is used.
  std::vector<std::size_t> checkpoints;
  std::size_t stride = 0;  // 0 selects max(1, steps / 200)
  bool track_fidelity = true;
  bool track_info = false;  // needs sigma > 0
  double rank_tol = kDefaultRankTolerance;
  ProjectionOptions projection;
};

struct ReconstructionResult {
  std::vector<std::size_t> steps;
  std::vector<double> fidelity;  // empty unless track_fidelity
  InfoSeries info;               // empty unless track_info
  DensityMatrix truth;
  DensityMatrix estimate;        // projected estimate at the last checkpoint
  bool projection_converged = true;
  Spectrum final_spectrum;       // spectrum of O~^T O~ / sigma^2 at the last checkpoint (track_info)
  double final_trace = 0.0;      // its trace
};

/// Checkpoints stride, 2*stride, ..., always ending at `steps`.
std::vector<std::size_t> checkpoint_steps(std::size_t steps, std::size_t stride = 0);

Observable make_initial_observable(InitialObservable kind, Index dim, RandomStream& rng, Index basis_index = 0);

/// One end-to-end trial. Sub-streams of `trial`: 0 process, 1 state, 2 noise, 3 observable.
ReconstructionResult reconstruct(const ReconstructionConfig& config, const RandomStream& trial);

}  // namespace tomolab
