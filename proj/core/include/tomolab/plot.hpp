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

#include <filesystem>
#include <string>
#include <vector>

namespace tomolab::plot {

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

struct Axes {
  std::string title;
  std::string xlabel;
  std::string ylabel;
};

/// Static SVG line chart.
void write_lines(const std::filesystem::path& path, const Axes& axes, const std::vector<Series>& series);

/// Static SVG histogram (bar heights are densities) with an optional overlaid curve.
void write_histogram(const std::filesystem::path& path, const Axes& axes, const std::vector<double>& edges,
                     const std::vector<double>& heights, const Series& curve);

}  // namespace tomolab::plot
