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

#include "tomolab/infometrics.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

#include <Eigen/Eigenvalues>

#include "tomolab/error.hpp"

namespace tomolab {

Spectrum Spectrum::from_values(std::vector<double> values) {
  std::sort(values.begin(), values.end(), std::greater<>());
  if (!values.empty()) {
    const double floor = -1e-8 * std::max(values.front(), 0.0);
    for (double& v : values) {
      if (!std::isfinite(v)) throw DomainError("spectrum contains a non-finite value");
      if (v < 0.0) {
        if (v < floor) throw InvalidParameter("spectrum has a significantly negative eigenvalue");
        v = 0.0;
      }
    }
  }
  Spectrum s;
  s.values_ = std::move(values);
  return s;
}

double Spectrum::sum() const { return std::accumulate(values_.begin(), values_.end(), 0.0); }

std::vector<double> Spectrum::normalized() const {
  const double total = sum();
  if (!(total > 0.0)) throw DomainError("cannot normalize an all-zero spectrum");
  std::vector<double> out(values_);
  for (double& v : out) v /= total;
  return out;
}

Spectrum spectrum(const InverseCovariance& invcov) {
  Eigen::SelfAdjointEigenSolver<RMatrix> es(invcov.matrix(), Eigen::EigenvaluesOnly);
  const RVector& w = es.eigenvalues();
  return Spectrum::from_values(std::vector<double>(w.data(), w.data() + w.size()));
}

double fisher_info(const Spectrum& spec, double epsilon) {
  if (!(epsilon >= 0.0)) throw InvalidParameter("epsilon must be >= 0");
  if (spec.size() == 0) throw DomainError("Fisher information of an empty spectrum");
  double total = 0.0;
  for (double v : spec.values()) {
    const double shifted = v + epsilon;
    if (!(shifted > 0.0)) throw DomainError("zero eigenvalue with epsilon = 0; Fisher information diverges");
    total += 1.0 / shifted;
  }
  return 1.0 / total;
}

double shannon_entropy(const Spectrum& spec) {
  const double total = spec.sum();
  if (!(total > 0.0)) throw DomainError("entropy of an all-zero spectrum");
  double h = 0.0;
  for (double v : spec.values()) {
    if (v > 0.0) {
      const double p = v / total;
      h -= p * std::log(p);
    }
  }
  return std::max(h, 0.0);
}

std::size_t numerical_rank(const Spectrum& spec, double rel_tol) {
  if (!(rel_tol > 0.0 && rel_tol < 1.0)) throw InvalidParameter("rank tolerance must lie in (0, 1)");
  if (spec.size() == 0 || !(spec[0] > 0.0)) return 0;
  const double cut = rel_tol * spec[0];
  return static_cast<std::size_t>(std::count_if(spec.values().begin(), spec.values().end(),
                                                [cut](double v) { return v > cut; }));
}

void InfoSeries::push(const InfoRecord& record) {
  if (!records_.empty() && record.step <= records_.back().step) {
    throw InvalidParameter("info series steps must be strictly increasing");
  }
  records_.push_back(record);
}

InfoRecord info_record(std::size_t step, const Spectrum& spec, double epsilon, double rel_tol) {
  InfoRecord r;
  r.step = step;
  r.rank = numerical_rank(spec, rel_tol);
  r.entropy = spec.sum() > 0.0 ? shannon_entropy(spec) : 0.0;
  r.fisher = (epsilon > 0.0 || r.rank == spec.size()) && spec.sum() > 0.0 ? fisher_info(spec, epsilon) : 0.0;
  return r;
}

InfoSeries info_series(const DesignMatrix& design, double sigma, double epsilon,
                       std::span<const std::size_t> checkpoints, double rel_tol) {
  NormalEquations normal(design.cols());
  InfoSeries series;
  std::size_t consumed = 0;
  for (std::size_t step : checkpoints) {
    if (step > static_cast<std::size_t>(design.rows())) throw InvalidParameter("checkpoint beyond design rows");
    if (step < consumed) throw InvalidParameter("checkpoints must be ordered");
    if (step > consumed) {
      normal.add_rows(design.values().middleRows(static_cast<Index>(consumed), static_cast<Index>(step - consumed)));
      consumed = step;
    }
    series.push(info_record(step, spectrum(normal.inverse_covariance(sigma)), epsilon, rel_tol));
  }
  return series;
}

}  // namespace tomolab
