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
#include <vector>

#include "tomolab/config.hpp"
#include "tomolab/reconstruct.hpp"
#include "tomolab/rmtref.hpp"

namespace tomolab {

/// Result of one trial; `result` is empty when the trial threw.
struct TrialOutcome {
  std::optional<ReconstructionResult> result;
  std::string error;
};

/// TOMOLAB_THREADS if set (> 0), else hardware concurrency; never more than `trials`.
std::size_t worker_count(std::size_t trials);

/// Trial k runs on RandomStream::derive(master_seed, k). Outcomes are returned in
/// trial order whatever the completion order.
std::vector<TrialOutcome> run_trials(const ReconstructionConfig& config, std::uint64_t master_seed,
                                     std::size_t trials, std::size_t workers = 0);

ReconstructionConfig make_reconstruction(const ExperimentConfig& config);

/// Per-checkpoint mean and standard error over the successful trials.
struct SeriesStats {
  std::vector<std::size_t> steps;
  std::vector<double> mean;
  std::vector<double> stderr_;
  std::size_t count = 0;
};

enum class Metric { fidelity, fisher, entropy, rank };
SeriesStats series_stats(const std::vector<TrialOutcome>& outcomes, Metric metric);

std::size_t count_failed(const std::vector<TrialOutcome>& outcomes);

/// 0 when at least 90% of trials succeeded, else 3.
int exit_code_for(std::size_t failed, std::size_t trials);

struct CommandResult {
  int exit_code = 0;
  std::size_t trials_failed = 0;
  std::filesystem::path out;
};

CommandResult cmd_run(const ExperimentConfig& config);
CommandResult cmd_spectra(const ExperimentConfig& config);
CommandResult cmd_rmt_compare(const ExperimentConfig& config);
CommandResult cmd_kicked_top(const ExperimentConfig& config);

/// Simulated information statistics next to the reference law for one ensemble.
struct RmtComparison {
  LawKind law = LawKind::marchenko_pastur;
  std::string law_description;
  double entropy_sim = 0.0;
  double entropy_stderr = 0.0;
  double entropy_law = 0.0;
  double fisher_sim = 0.0;
  double fisher_law = 0.0;
  double trace_total = 0.0;  // mean final Tr(C^-1)
  double rank_mean = 0.0;
  double rank_expected = 0.0;
  LawDistance histogram;     // first successful trial against the law
  double ks_critical = 0.0;  // alpha = 0.01
  LawDistance wishart;       // sample_wishart(D, N) against mp_law(D, N)
  double wishart_ks_critical = 0.0;
  std::size_t trials_used = 0;
};

/// Haar and fixed-Haar ensembles compare with Marchenko-Pastur, the diagonal and
/// kicked-top ensembles with Porter-Thomas.
RmtComparison rmt_compare(const ExperimentConfig& config, const std::vector<TrialOutcome>& outcomes);

struct KickedTopCase {
  std::string name;
  ProcessPolicy policy;
};

/// regular, chaotic, eigenvalues-chaotic, eigenvectors-chaotic (hybrids take the
/// other half from the regular top).
std::vector<KickedTopCase> kicked_top_cases(double j, double k0_regular, double k0_chaotic);

}  // namespace tomolab
