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

#include <functional>

namespace tomolab::quadrature {

struct Options {
  double abs_tol = 1e-9;
  double rel_tol = 0.0;
  int max_subdivisions = 2000;
};

struct Result {
  double value = 0.0;
  double abs_error = 0.0;
  int evaluations = 0;
};

/// Globally adaptive 15-point Gauss-Kronrod quadrature on [a, b]: the interval
/// with the largest error estimate is bisected until the summed estimate meets
/// max(abs_tol, rel_tol * |value|). Throws QuadratureError otherwise.
Result integrate(const std::function<double(double)>& f, double a, double b, const Options& options = {});

/// Integral over [a, inf) through the map x = a + t / (1 - t), t in [0, 1).
Result integrate_to_infinity(const std::function<double(double)>& f, double a, const Options& options = {});

}  // namespace tomolab::quadrature
