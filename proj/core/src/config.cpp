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

#include "tomolab/config.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "tomolab/error.hpp"

namespace tomolab {

namespace {

constexpr std::string_view kAuto = "auto";

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

template <typename T>
T parse_integer(std::string_view key, std::string_view value) {
  T out{};
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size()) {
    throw ConfigError(std::string(key), "expected a non-negative integer, got '" + std::string(value) + "'");
  }
  return out;
}

double parse_real(std::string_view key, std::string_view value) {
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size() || !std::isfinite(out)) {
    throw ConfigError(std::string(key), "expected a finite number, got '" + std::string(value) + "'");
  }
  return out;
}

template <typename E, std::size_t N>
E parse_enum(std::string_view key, std::string_view value, const std::array<std::pair<std::string_view, E>, N>& table) {
  for (const auto& [name, e] : table) {
    if (name == value) return e;
  }
  std::string allowed;
  for (const auto& [name, e] : table) allowed += (allowed.empty() ? "" : "|") + std::string(name);
  throw ConfigError(std::string(key), "expected one of {" + allowed + "}, got '" + std::string(value) + "'");
}

constexpr std::array<std::pair<std::string_view, EnsembleKind>, 4> kEnsembles{{
    {"haar", EnsembleKind::haar},
    {"fixed-haar", EnsembleKind::fixed_haar},
    {"diagonal", EnsembleKind::diagonal},
    {"kicked-top", EnsembleKind::kicked_top},
}};
constexpr std::array<std::pair<std::string_view, FrameChoice>, 2> kFrames{{
    {"random", FrameChoice::random},
    {"computational", FrameChoice::computational},
}};
constexpr std::array<std::pair<std::string_view, InitialObservable>, 4> kObservables{{
    {"jx", InitialObservable::jx},
    {"jz", InitialObservable::jz},
    {"basis-element", InitialObservable::basis_element},
    {"rotated", InitialObservable::rotated},
}};
constexpr std::array<std::pair<std::string_view, StateFamily>, 2> kStates{{
    {"haar-pure", StateFamily::haar_pure},
    {"hs-mixed", StateFamily::hs_mixed},
}};
constexpr std::array<std::pair<std::string_view, bool>, 2> kSwitch{{{"on", true}, {"off", false}}};

template <typename E, std::size_t N>
std::string name_of(E e, const std::array<std::pair<std::string_view, E>, N>& table) {
  for (const auto& [name, v] : table) {
    if (v == e) return std::string(name);
  }
  return "?";
}

}  // namespace

std::string format_double(double value) {
  std::array<char, 64> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  if (ec != std::errc()) throw Error("cannot format number");
  return {buf.data(), ptr};
}

std::string to_string(EnsembleKind kind) { return name_of(kind, kEnsembles); }
std::string to_string(FrameChoice frame) { return name_of(frame, kFrames); }
std::string to_string(InitialObservable observable) { return name_of(observable, kObservables); }
std::string to_string(StateFamily state) { return name_of(state, kStates); }

void apply_setting(ExperimentConfig& c, std::string_view key, std::string_view value) {
  value = trim(value);
  if (value.empty()) throw ConfigError(std::string(key), "missing value");
  if (key == "dim") {
    c.dim = parse_integer<Index>(key, value);
  } else if (key == "steps") {
    c.steps = value == kAuto ? std::nullopt : std::optional(parse_integer<std::size_t>(key, value));
  } else if (key == "sigma") {
    c.sigma = parse_real(key, value);
  } else if (key == "epsilon") {
    c.epsilon = value == kAuto ? std::nullopt : std::optional(parse_real(key, value));
  } else if (key == "trials") {
    c.trials = parse_integer<std::size_t>(key, value);
  } else if (key == "ensemble") {
    c.ensemble = parse_enum(key, value, kEnsembles);
  } else if (key == "k0") {
    c.k0 = parse_real(key, value);
  } else if (key == "k0_regular") {
    c.k0_regular = parse_real(key, value);
  } else if (key == "k0_chaotic") {
    c.k0_chaotic = parse_real(key, value);
  } else if (key == "frame") {
    c.frame = parse_enum(key, value, kFrames);
  } else if (key == "observable") {
    c.observable = parse_enum(key, value, kObservables);
  } else if (key == "state") {
    c.state = parse_enum(key, value, kStates);
  } else if (key == "stride") {
    c.stride = parse_integer<std::size_t>(key, value);
  } else if (key == "seed") {
    c.seed = parse_integer<std::uint64_t>(key, value);
  } else if (key == "out") {
    c.out = std::string(value);
  } else if (key == "plots") {
    c.plots = parse_enum(key, value, kSwitch);
  } else {
    throw ConfigError(std::string(key), "unknown key");
  }
}

void validate(const ExperimentConfig& c) {
  if (c.dim < 2 || c.dim > 64) throw ConfigError("dim", "must lie in [2, 64]");
  const std::size_t steps = c.resolved_steps();
  if (steps < 1 || steps > 1'000'000) throw ConfigError("steps", "must lie in [1, 1000000]");
  if (!(c.sigma >= 0.0)) throw ConfigError("sigma", "must be >= 0");
  if (!(c.resolved_epsilon() >= 0.0)) throw ConfigError("epsilon", "must be >= 0");
  if (c.trials < 1 || c.trials > 100'000) throw ConfigError("trials", "must lie in [1, 100000]");
  if (c.stride > steps) throw ConfigError("stride", "must not exceed steps");
  if (c.out.empty()) throw ConfigError("out", "must not be empty");
}

ExperimentConfig parse_config(std::string_view text, ExperimentConfig base) {
  std::set<std::string, std::less<>> seen;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto eol = text.find('\n');
    std::string_view line = text.substr(0, eol);
    text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("line " + std::to_string(line_no), "expected 'key = value'");
    }
    const std::string_view key = trim(line.substr(0, eq));
    if (!seen.emplace(key).second) throw ConfigError(std::string(key), "duplicate key");
    apply_setting(base, key, line.substr(eq + 1));
  }
  return base;
}

ExperimentConfig load_config(const std::filesystem::path& path, ExperimentConfig base) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("config", "cannot read '" + path.string() + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str(), std::move(base));
}

std::string serialize(const ExperimentConfig& c) {
  std::ostringstream os;
  os << "dim = " << c.dim << '\n'
     << "steps = " << (c.steps ? std::to_string(*c.steps) : std::string(kAuto)) << '\n'
     << "sigma = " << format_double(c.sigma) << '\n'
     << "epsilon = " << (c.epsilon ? format_double(*c.epsilon) : std::string(kAuto)) << '\n'
     << "trials = " << c.trials << '\n'
     << "ensemble = " << to_string(c.ensemble) << '\n'
     << "k0 = " << format_double(c.k0) << '\n'
     << "k0_regular = " << format_double(c.k0_regular) << '\n'
     << "k0_chaotic = " << format_double(c.k0_chaotic) << '\n'
     << "frame = " << to_string(c.frame) << '\n'
     << "observable = " << to_string(c.observable) << '\n'
     << "state = " << to_string(c.state) << '\n'
     << "stride = " << c.stride << '\n'
     << "seed = " << c.seed << '\n'
     << "out = " << c.out << '\n'
     << "plots = " << (c.plots ? "on" : "off") << '\n';
  return os.str();
}

bool operator==(const ExperimentConfig& a, const ExperimentConfig& b) {
  return a.dim == b.dim && a.steps == b.steps && a.sigma == b.sigma && a.epsilon == b.epsilon &&
         a.trials == b.trials && a.ensemble == b.ensemble && a.k0 == b.k0 && a.k0_regular == b.k0_regular &&
         a.k0_chaotic == b.k0_chaotic && a.frame == b.frame && a.observable == b.observable && a.state == b.state &&
         a.stride == b.stride && a.seed == b.seed && a.out == b.out && a.plots == b.plots;
}

ProcessPolicy make_policy(const ExperimentConfig& c) {
  switch (c.ensemble) {
    case EnsembleKind::haar:
      return policy::HaarPerStep{};
    case EnsembleKind::fixed_haar:
      return policy::FixedHaarRepeated{};
    case EnsembleKind::diagonal:
      return policy::DiagonalRandom{c.frame};
    case EnsembleKind::kicked_top:
      return policy::KickedTop{{0.5 * static_cast<double>(c.dim - 1), c.k0}};
  }
  throw ConfigError("ensemble", "unknown ensemble");
}

}  // namespace tomolab
