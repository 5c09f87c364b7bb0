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

#include "tomolab/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <thread>

#include "tomolab/csv.hpp"
#include "tomolab/error.hpp"
#include "tomolab/plot.hpp"

#ifndef TOMOLAB_VERSION_STRING
#define TOMOLAB_VERSION_STRING "unknown"
#endif

namespace tomolab {

namespace {

constexpr double kKsAlpha = 0.01;

using Clock = std::chrono::steady_clock;

std::string utc_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

std::filesystem::path prepare_output(const ExperimentConfig& config) {
  const std::filesystem::path out(config.out);
  std::error_code ec;
  std::filesystem::create_directories(out, ec);
  if (ec) throw ConfigError("out", "cannot create directory '" + out.string() + "': " + ec.message());
  std::ofstream snapshot(out / "config.txt", std::ios::binary | std::ios::trunc);
  if (!snapshot) throw ConfigError("out", "cannot write into '" + out.string() + "'");
  snapshot << serialize(config);
  return out;
}

void write_metadata(const std::filesystem::path& out, const std::string& command, const ExperimentConfig& config,
                    const std::vector<TrialOutcome>& outcomes, Clock::time_point start) {
  std::ofstream meta(out / "metadata.txt", std::ios::binary | std::ios::trunc);
  const double wall = std::chrono::duration<double>(Clock::now() - start).count();
  meta << "command = " << command << '\n'
       << "version = " << TOMOLAB_VERSION_STRING << '\n'
       << "timestamp = " << utc_timestamp() << '\n'
       << "seed = " << config.seed << '\n'
       << "trials = " << outcomes.size() << '\n'
       << "trials_failed = " << count_failed(outcomes) << '\n'
       << "wall_time_s = " << format_double(wall) << '\n';
  for (std::size_t k = 0; k < outcomes.size(); ++k) {
    if (!outcomes[k].result) meta << "failed_trial_" << k << " = " << outcomes[k].error << '\n';
  }
}

CommandResult finish(const std::filesystem::path& out, const std::vector<TrialOutcome>& outcomes) {
  const std::size_t failed = count_failed(outcomes);
  return {exit_code_for(failed, outcomes.size()), failed, out};
}

const ReconstructionResult* first_success(const std::vector<TrialOutcome>& outcomes) {
  for (const auto& o : outcomes) {
    if (o.result) return &*o.result;
  }
  return nullptr;
}

std::vector<double> as_doubles(const std::vector<std::size_t>& v) { return {v.begin(), v.end()}; }

void write_spectrum(const std::filesystem::path& path, const Spectrum& spec) {
  CsvWriter csv(path, {"index", "eigenvalue", "normalized_eigenvalue"});
  const std::vector<double> normalized = spec.size() > 0 && spec.sum() > 0.0 ? spec.normalized()
                                                                             : std::vector<double>(spec.size(), 0.0);
  for (std::size_t i = 0; i < spec.size(); ++i) {
    csv.row({static_cast<std::uint64_t>(i), spec[i], normalized[i]});
  }
}

double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

double stderr_of(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  const double m = mean_of(v);
  double ss = 0.0;
  for (double x : v) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(v.size() - 1) / static_cast<double>(v.size()));
}

double metric_value(const ReconstructionResult& r, Metric metric, std::size_t i) {
  switch (metric) {
    case Metric::fidelity: return r.fidelity[i];
    case Metric::fisher: return r.info.records()[i].fisher;
    case Metric::entropy: return r.info.records()[i].entropy;
    case Metric::rank: return static_cast<double>(r.info.records()[i].rank);
  }
  return 0.0;
}

std::size_t metric_length(const ReconstructionResult& r, Metric metric) {
  return metric == Metric::fidelity ? r.fidelity.size() : r.info.size();
}

}  // namespace

std::size_t worker_count(std::size_t trials) {
  std::size_t workers = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("TOMOLAB_THREADS"); env != nullptr && *env != '\0') {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end == env || *end != '\0' || v == 0) throw ConfigError("TOMOLAB_THREADS", "must be a positive integer");
    workers = static_cast<std::size_t>(v);
  }
  return std::max<std::size_t>(1, std::min(workers, trials));
}

std::vector<TrialOutcome> run_trials(const ReconstructionConfig& config, std::uint64_t master_seed,
                                     std::size_t trials, std::size_t workers) {
  std::vector<TrialOutcome> outcomes(trials);
  if (workers == 0) workers = worker_count(trials);
  workers = std::max<std::size_t>(1, std::min(workers, trials));
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t k = next++; k < trials; k = next++) {
      try {
        outcomes[k].result = reconstruct(config, RandomStream::derive(master_seed, k));
      } catch (const std::exception& e) {
        outcomes[k].error = e.what();
      }
    }
  };
  {
    std::vector<std::jthread> pool;
    for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(work);
    work();
  }
  return outcomes;
}

ReconstructionConfig make_reconstruction(const ExperimentConfig& config) {
  validate(config);
  ReconstructionConfig rc;
  rc.dim = config.dim;
  rc.policy = make_policy(config);
  rc.observable = config.observable;
  rc.steps = config.resolved_steps();
  rc.sigma = config.sigma;
  rc.epsilon = config.resolved_epsilon();
  rc.state = config.state;
  rc.stride = config.stride;
  return rc;
}

SeriesStats series_stats(const std::vector<TrialOutcome>& outcomes, Metric metric) {
  SeriesStats stats;
  const ReconstructionResult* first = first_success(outcomes);
  if (first == nullptr) return stats;
  const std::size_t len = metric_length(*first, metric);
  for (std::size_t i = 0; i < len; ++i) {
    std::vector<double> values;
    for (const auto& o : outcomes) {
      if (o.result && metric_length(*o.result, metric) == len) values.push_back(metric_value(*o.result, metric, i));
    }
    stats.steps.push_back(metric == Metric::fidelity ? first->steps[i] : first->info.records()[i].step);
    stats.mean.push_back(mean_of(values));
    stats.stderr_.push_back(stderr_of(values));
    stats.count = values.size();
  }
  return stats;
}

std::size_t count_failed(const std::vector<TrialOutcome>& outcomes) {
  return static_cast<std::size_t>(
      std::count_if(outcomes.begin(), outcomes.end(), [](const TrialOutcome& o) { return !o.result; }));
}

int exit_code_for(std::size_t failed, std::size_t trials) {
  const std::size_t ok = trials - std::min(failed, trials);
  return 10 * ok >= 9 * trials ? 0 : 3;
}

// ---------------------------------------------------------------------------
// run

CommandResult cmd_run(const ExperimentConfig& config) {
  const auto start = Clock::now();
  ReconstructionConfig rc = make_reconstruction(config);
  const std::filesystem::path out = prepare_output(config);
  const auto outcomes = run_trials(rc, config.seed, config.trials);

  const SeriesStats stats = series_stats(outcomes, Metric::fidelity);
  {
    CsvWriter csv(out / "run.csv", {"step", "mean_fidelity", "stderr_fidelity"});
    for (std::size_t i = 0; i < stats.steps.size(); ++i) {
      csv.row({static_cast<std::uint64_t>(stats.steps[i]), stats.mean[i], stats.stderr_[i]});
    }
  }
  {
    CsvWriter csv(out / "run_trials.csv", {"trial", "step", "fidelity"});
    for (std::size_t k = 0; k < outcomes.size(); ++k) {
      if (!outcomes[k].result) continue;
      const auto& r = *outcomes[k].result;
      for (std::size_t i = 0; i < r.fidelity.size(); ++i) {
        csv.row({static_cast<std::uint64_t>(k), static_cast<std::uint64_t>(r.steps[i]), r.fidelity[i]});
      }
    }
  }
  if (config.plots) {
    plot::write_lines(out / "run.svg",
                      {"Reconstruction fidelity, " + to_string(config.ensemble) + ", d = " + std::to_string(config.dim),
                       "step", "mean fidelity"},
                      {{"mean fidelity", as_doubles(stats.steps), stats.mean}});
  }
  write_metadata(out, "run", config, outcomes, start);
  return finish(out, outcomes);
}

// ---------------------------------------------------------------------------
// spectra

CommandResult cmd_spectra(const ExperimentConfig& config) {
  const auto start = Clock::now();
  ReconstructionConfig rc = make_reconstruction(config);
  if (!(config.sigma > 0.0)) throw ConfigError("sigma", "spectra need sigma > 0");
  rc.track_fidelity = false;
  rc.track_info = true;
  const std::filesystem::path out = prepare_output(config);
  const auto outcomes = run_trials(rc, config.seed, config.trials);

  const SeriesStats fisher = series_stats(outcomes, Metric::fisher);
  const SeriesStats entropy = series_stats(outcomes, Metric::entropy);
  const SeriesStats rank = series_stats(outcomes, Metric::rank);
  {
    CsvWriter csv(out / "spectra.csv", {"step", "fisher", "entropy", "rank"});
    for (std::size_t i = 0; i < fisher.steps.size(); ++i) {
      csv.row({static_cast<std::uint64_t>(fisher.steps[i]), fisher.mean[i], entropy.mean[i], rank.mean[i]});
    }
  }
  const ReconstructionResult* first = first_success(outcomes);
  write_spectrum(out / "spectrum_final.csv", first ? first->final_spectrum : Spectrum{});
  if (config.plots && first != nullptr) {
    const auto steps = as_doubles(fisher.steps);
    plot::write_lines(out / "fisher.svg", {"Collective Fisher information", "step", "FI"},
                      {{"FI", steps, fisher.mean}});
    plot::write_lines(out / "entropy.svg", {"Shannon entropy of the normalized spectrum", "step", "H (nats)"},
                      {{"H", steps, entropy.mean}});
  }
  write_metadata(out, "spectra", config, outcomes, start);
  return finish(out, outcomes);
}

// ---------------------------------------------------------------------------
// rmt-compare

RmtComparison rmt_compare(const ExperimentConfig& config, const std::vector<TrialOutcome>& outcomes) {
  const Index d = config.dim;
  const Index modes = d * d - 1;
  const auto steps = static_cast<Index>(config.resolved_steps());
  const double eps = config.resolved_epsilon();
  if (steps < modes) throw ConfigError("steps", "reference laws need steps >= dim^2 - 1");

  RmtComparison cmp;
  std::vector<double> entropies, fishers, traces, ranks;
  for (const auto& o : outcomes) {
    if (!o.result || o.result->info.empty()) continue;
    entropies.push_back(o.result->info.back().entropy);
    fishers.push_back(o.result->info.back().fisher);
    ranks.push_back(static_cast<double>(o.result->info.back().rank));
    traces.push_back(o.result->final_trace);
  }
  if (entropies.empty()) throw Error("no successful trials to compare");
  cmp.trials_used = entropies.size();
  cmp.entropy_sim = mean_of(entropies);
  cmp.entropy_stderr = stderr_of(entropies);
  cmp.fisher_sim = mean_of(fishers);
  cmp.trace_total = mean_of(traces);
  cmp.rank_mean = mean_of(ranks);

  const bool haar_like = config.ensemble == EnsembleKind::haar || config.ensemble == EnsembleKind::fixed_haar;
  cmp.rank_expected = config.ensemble == EnsembleKind::haar ? static_cast<double>(modes)
                                                            : static_cast<double>(d * d - d + 1);
  const SpectralLaw law = haar_like ? mp_law(modes, steps) : pt_law(d);
  cmp.law = law.kind();
  cmp.law_description = law.describe();
  if (haar_like) {
    cmp.entropy_law = mp_entropy(law);
    cmp.fisher_law = mp_fisher(law, cmp.trace_total, eps);
  } else {
    cmp.entropy_law = pt_entropy(d);
    cmp.fisher_law = eps > 0.0 ? pt_fisher(d, cmp.trace_total, eps) : 0.0;
  }
  cmp.histogram = spectrum_vs_law(first_success(outcomes)->final_spectrum, law);
  cmp.ks_critical = ks_critical_value(cmp.histogram.samples, kKsAlpha);

  RandomStream wishart_rng = RandomStream::derive(config.seed, 0xFFFFFFFFull);
  const Spectrum w = sample_wishart(modes, steps, wishart_rng);
  cmp.wishart = spectrum_vs_law(w, mp_law(modes, steps));
  cmp.wishart_ks_critical = ks_critical_value(cmp.wishart.samples, kKsAlpha);
  return cmp;
}

CommandResult cmd_rmt_compare(const ExperimentConfig& config) {
  const auto start = Clock::now();
  ReconstructionConfig rc = make_reconstruction(config);
  if (!(config.sigma > 0.0)) throw ConfigError("sigma", "rmt-compare needs sigma > 0");
  if (static_cast<Index>(rc.steps) < config.dim * config.dim - 1) {
    throw ConfigError("steps", "reference laws need steps >= dim^2 - 1");
  }
  rc.track_fidelity = false;
  rc.track_info = true;
  rc.checkpoints = {rc.steps};
  const std::filesystem::path out = prepare_output(config);
  const auto outcomes = run_trials(rc, config.seed, config.trials);
  if (first_success(outcomes) == nullptr) {
    write_metadata(out, "rmt-compare", config, outcomes, start);
    return finish(out, outcomes);
  }
  const RmtComparison cmp = rmt_compare(config, outcomes);

  const auto ratio = [](double sim, double pred) { return pred != 0.0 ? sim / pred : 0.0; };
  {
    CsvWriter csv(out / "rmt.csv", {"quantity", "simulated", "predicted", "ratio"});
    csv.row({std::string("entropy"), cmp.entropy_sim, cmp.entropy_law, ratio(cmp.entropy_sim, cmp.entropy_law)});
    csv.row({std::string("fisher"), cmp.fisher_sim, cmp.fisher_law, ratio(cmp.fisher_sim, cmp.fisher_law)});
    csv.row({std::string("rank"), cmp.rank_mean, cmp.rank_expected, ratio(cmp.rank_mean, cmp.rank_expected)});
    csv.row({std::string("ks_statistic"), cmp.histogram.ks, cmp.ks_critical, ratio(cmp.histogram.ks, cmp.ks_critical)});
    csv.row({std::string("wishart_ks_statistic"), cmp.wishart.ks, cmp.wishart_ks_critical,
             ratio(cmp.wishart.ks, cmp.wishart_ks_critical)});
  }
  {
    std::ofstream report(out / "rmt_report.txt", std::ios::binary | std::ios::trunc);
    report << "law = " << cmp.law_description << '\n'
           << "trials_used = " << cmp.trials_used << '\n'
           << "trace_total = " << format_double(cmp.trace_total) << '\n'
           << "epsilon = " << format_double(config.resolved_epsilon()) << '\n'
           << "entropy_simulated = " << format_double(cmp.entropy_sim) << '\n'
           << "entropy_stderr = " << format_double(cmp.entropy_stderr) << '\n'
           << "entropy_law = " << format_double(cmp.entropy_law) << '\n'
           << "fisher_simulated = " << format_double(cmp.fisher_sim) << '\n'
           << "fisher_law = " << format_double(cmp.fisher_law) << '\n'
           << "histogram_l1 = " << format_double(cmp.histogram.l1) << '\n'
           << "histogram_bins = " << cmp.histogram.bins << '\n'
           << "ks = " << format_double(cmp.histogram.ks) << '\n'
           << "ks_critical_0.01 = " << format_double(cmp.ks_critical) << '\n'
           << "wishart_l1 = " << format_double(cmp.wishart.l1) << '\n'
           << "wishart_ks = " << format_double(cmp.wishart.ks) << '\n'
           << "wishart_ks_critical_0.01 = " << format_double(cmp.wishart_ks_critical) << '\n';
  }
  if (config.plots) {
    // Histogram in unit-mean units against the law density.
    const Spectrum& spec = first_success(outcomes)->final_spectrum;
    const Index d = config.dim;
    const bool haar_like = cmp.law == LawKind::marchenko_pastur;
    const SpectralLaw law = haar_like ? mp_law(d * d - 1, static_cast<Index>(config.resolved_steps())) : pt_law(d);
    std::vector<double> y = spec.normalized();
    y.resize(static_cast<std::size_t>(law.modes()), 0.0);
    for (double& v : y) v *= static_cast<double>(law.modes());
    const double lo = haar_like ? law.unit_lower() : 0.0;
    const double hi = std::max(haar_like ? law.unit_upper() : 0.0, *std::max_element(y.begin(), y.end()));
    const std::size_t bins = std::max<std::size_t>(cmp.histogram.bins, 1);
    std::vector<double> edges(bins + 1), heights(bins, 0.0);
    for (std::size_t b = 0; b <= bins; ++b) edges[b] = lo + (hi - lo) * static_cast<double>(b) / static_cast<double>(bins);
    const double width = (hi - lo) / static_cast<double>(bins);
    for (double v : y) {
      if (v < lo || v > hi || !(width > 0.0)) continue;
      heights[std::min(static_cast<std::size_t>((v - lo) / width), bins - 1)] +=
          1.0 / (static_cast<double>(y.size()) * width);
    }
    const double cap = 3.0 * std::max(1e-12, *std::max_element(heights.begin(), heights.end()));
    plot::Series curve{law.describe(), {}, {}};
    for (int i = 0; i <= 400; ++i) {
      const double x = lo + (hi - lo) * (i + 0.5) / 401.0;
      curve.x.push_back(x);
      curve.y.push_back(std::min(cap, law.unit_density(x)));
    }
    plot::write_histogram(out / "rmt.svg", {"Normalized spectrum vs reference law", "eigenvalue / mean", "density"},
                          edges, heights, curve);
  }
  write_metadata(out, "rmt-compare", config, outcomes, start);
  return finish(out, outcomes);
}

// ---------------------------------------------------------------------------
// kicked-top

std::vector<KickedTopCase> kicked_top_cases(double j, double k0_regular, double k0_chaotic) {
  const KickedTopParams regular{j, k0_regular};
  const KickedTopParams chaotic{j, k0_chaotic};
  return {
      {"regular", policy::KickedTop{regular}},
      {"chaotic", policy::KickedTop{chaotic}},
      {"eigenvalues-chaotic", policy::HybridEigenSwap{chaotic, regular}},
      {"eigenvectors-chaotic", policy::HybridEigenSwap{regular, chaotic}},
  };
}

CommandResult cmd_kicked_top(const ExperimentConfig& config) {
  const auto start = Clock::now();
  ReconstructionConfig rc = make_reconstruction(config);
  if (!(config.sigma > 0.0)) throw ConfigError("sigma", "kicked-top needs sigma > 0");
  rc.track_fidelity = true;
  rc.track_info = true;
  const std::filesystem::path out = prepare_output(config);
  const double j = 0.5 * static_cast<double>(config.dim - 1);

  std::vector<InitialObservable> observables{config.observable};
  if (config.observable != InitialObservable::rotated) observables.push_back(InitialObservable::rotated);

  std::vector<TrialOutcome> all;
  CsvWriter csv(out / "kicked_top.csv", {"case", "observable", "step", "mean_fidelity", "stderr_fidelity",
                                         "mean_entropy", "stderr_entropy"});
  for (const InitialObservable obs : observables) {
    std::vector<plot::Series> fid_plot, ent_plot;
    for (const auto& c : kicked_top_cases(j, config.k0_regular, config.k0_chaotic)) {
      rc.policy = c.policy;
      rc.observable = obs;
      // Trial k sees the same state and rotation in every case.
      const auto outcomes = run_trials(rc, config.seed, config.trials);
      const SeriesStats fid = series_stats(outcomes, Metric::fidelity);
      const SeriesStats ent = series_stats(outcomes, Metric::entropy);
      for (std::size_t i = 0; i < fid.steps.size(); ++i) {
        csv.row({c.name, to_string(obs), static_cast<std::uint64_t>(fid.steps[i]), fid.mean[i], fid.stderr_[i],
                 ent.mean[i], ent.stderr_[i]});
      }
      fid_plot.push_back({c.name, as_doubles(fid.steps), fid.mean});
      ent_plot.push_back({c.name, as_doubles(ent.steps), ent.mean});
      all.insert(all.end(), outcomes.begin(), outcomes.end());
    }
    if (config.plots) {
      const std::string tag = to_string(obs);
      plot::write_lines(out / ("kicked_top_fidelity_" + tag + ".svg"),
                        {"Kicked top fidelity, initial observable " + tag, "step", "mean fidelity"}, fid_plot);
      plot::write_lines(out / ("kicked_top_entropy_" + tag + ".svg"),
                        {"Kicked top entropy, initial observable " + tag, "step", "H (nats)"}, ent_plot);
    }
  }
  write_metadata(out, "kicked-top", config, all, start);
  return finish(out, all);
}

}  // namespace tomolab
