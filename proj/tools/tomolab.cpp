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

// tomolab: continuous-measurement tomography experiments.
//
//   tomolab run         --dim 7 --ensemble diagonal --trials 50 --out out/run
//   tomolab spectra     --dim 21 --ensemble haar --out out/spectra
//   tomolab rmt-compare --dim 21 --ensemble diagonal --out out/rmt
//   tomolab kicked-top  --dim 21 --observable jz --steps 200 --out out/kt
//
// Settings are resolved as defaults < --config file < flags. Exit codes: 0 ok,
// 2 configuration error, 3 fewer than 90% of trials succeeded.

#include <cstdio>
#include <iostream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "tomolab/config.hpp"
#include "tomolab/error.hpp"
#include "tomolab/experiment.hpp"

namespace {

constexpr int kConfigExit = 2;

struct Flag {
  const char* name;
  const char* key;
  const char* help;
};

constexpr Flag kFlags[] = {
    {"--seed", "seed", "master seed (u64)"},
    {"--out", "out", "output directory"},
    {"--trials", "trials", "number of independent trials"},
    {"--dim", "dim", "Hilbert-space dimension d (kicked top: j = (d-1)/2)"},
    {"--steps", "steps", "measurement steps N (default 6 d^2)"},
    {"--sigma", "sigma", "measurement noise standard deviation"},
    {"--epsilon", "epsilon", "Tikhonov regularizer (default d^2)"},
    {"--ensemble", "ensemble", "haar|fixed-haar|diagonal|kicked-top"},
    {"--k0", "k0", "kicked-top chaoticity"},
    {"--frame", "frame", "random|computational (diagonal ensemble)"},
    {"--observable", "observable", "jx|jz|rotated"},
    {"--plots", "plots", "on|off"},
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Continuous-measurement quantum state tomography laboratory"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", std::string(TOMOLAB_VERSION));

  std::string config_path;
  app.add_option("--config", config_path, "key = value configuration file");
  std::vector<std::pair<const char*, std::string>> values;
  values.reserve(std::size(kFlags));
  for (const Flag& f : kFlags) {
    values.emplace_back(f.key, std::string{});
    app.add_option(f.name, values.back().second, f.help);
  }

  auto* run = app.add_subcommand("run", "fidelity of reconstruction versus step");
  auto* spectra = app.add_subcommand("spectra", "Fisher information, entropy and rank versus step");
  auto* rmt = app.add_subcommand("rmt-compare", "compare the final spectrum with its reference law");
  auto* kicked = app.add_subcommand("kicked-top", "regular, chaotic and hybrid kicked-top cases");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kConfigExit;
  }

  try {
    tomolab::ExperimentConfig config;
    if (!config_path.empty()) config = tomolab::load_config(config_path);
    for (std::size_t i = 0; i < std::size(kFlags); ++i) {
      if (app.count(kFlags[i].name) > 0) tomolab::apply_setting(config, values[i].first, values[i].second);
    }
    tomolab::validate(config);

    tomolab::CommandResult result;
    if (*run) {
      result = tomolab::cmd_run(config);
    } else if (*spectra) {
      result = tomolab::cmd_spectra(config);
    } else if (*rmt) {
      result = tomolab::cmd_rmt_compare(config);
    } else if (*kicked) {
      result = tomolab::cmd_kicked_top(config);
    }
    if (result.trials_failed > 0) {
      std::cerr << "tomolab: " << result.trials_failed << " trial(s) failed; see " << (result.out / "metadata.txt")
                << "\n";
    }
    std::cout << result.out.string() << "\n";
    return result.exit_code;
  } catch (const tomolab::ConfigError& e) {
    std::cerr << "tomolab: config error: " << e.what() << "\n";
    return kConfigExit;
  } catch (const std::exception& e) {
    std::cerr << "tomolab: " << e.what() << "\n";
    return 1;
  }
}
