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

#include "tomolab/quadrature.hpp"

#include <array>
#include <cmath>
#include <queue>
#include <vector>

#include "tomolab/error.hpp"

namespace tomolab::quadrature {

namespace {

// Kronrod nodes (positive half) and weights for G7-K15; Gauss weights apply to odd indices.
constexpr std::array<double, 8> kNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kKronrod = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kGauss = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double a, b, value, error;
  bool operator<(const Segment& other) const { return error < other.error; }
};

Segment gauss_kronrod(const std::function<double(double)>& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(center);
  double kronrod = fc * kKronrod[7];
  double gauss = fc * kGauss[3];
  for (int i = 0; i < 7; ++i) {
    const double dx = half * kNodes[static_cast<std::size_t>(i)];
    const double pair = f(center - dx) + f(center + dx);
    kronrod += kKronrod[static_cast<std::size_t>(i)] * pair;
    if (i % 2 == 1) gauss += kGauss[static_cast<std::size_t>(i / 2)] * pair;
  }
  return {a, b, kronrod * half, std::abs((kronrod - gauss) * half)};
}

}  // namespace

Result integrate(const std::function<double(double)>& f, double a, double b, const Options& options) {
  if (!(std::isfinite(a) && std::isfinite(b))) throw InvalidParameter("integration bounds must be finite");
  if (a == b) return {};
  if (b < a) {
    Result r = integrate(f, b, a, options);
    r.value = -r.value;
    return r;
  }
  std::priority_queue<Segment> work;
  Segment first = gauss_kronrod(f, a, b);
  double value = first.value;
  double error = first.error;
  work.push(first);
  int evaluations = 15;
  int subdivisions = 0;
  auto target = [&] { return std::max(options.abs_tol, options.rel_tol * std::abs(value)); };
  while (error > target()) {
    if (subdivisions >= options.max_subdivisions) {
      throw QuadratureError("quadrature did not reach tolerance", error);
    }
    Segment worst = work.top();
    work.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    Segment left = gauss_kronrod(f, worst.a, mid);
    Segment right = gauss_kronrod(f, mid, worst.b);
    value += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    evaluations += 30;
    ++subdivisions;
    work.push(left);
    work.push(right);
  }
  // Re-sum to shed the drift of the running updates.
  double total = 0.0;
  double total_error = 0.0;
  while (!work.empty()) {
    total += work.top().value;
    total_error += work.top().error;
    work.pop();
  }
  return {total, total_error, evaluations};
}

Result integrate_to_infinity(const std::function<double(double)>& f, double a, const Options& options) {
  auto mapped = [&](double t) {
    if (t >= 1.0) return 0.0;
    const double s = 1.0 - t;
    return f(a + t / s) / (s * s);
  };
  return integrate(mapped, 0.0, 1.0, options);
}

}  // namespace tomolab::quadrature
