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
#include <span>
#include <vector>

#include "tomolab/tomograph.hpp"

namespace tomolab {

inline constexpr double kDefaultRankTolerance = 1e-10;

/// Eigenvalues of an inverse covariance matrix, sorted descending. Round-off
/// negatives down to -1e-8 * lambda_max are clamped to zero.
class Spectrum {
 public:
  Spectrum() = default;
  static Spectrum from_values(std::vector<double> values);

  std::span<const double> values() const noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }
  double sum() const;
  /// Values divided by their sum.
  std::vector<double> normalized() const;

 private:
  std::vector<double> values_;
};

Spectrum spectrum(const InverseCovariance& invcov);

/// 1 / sum_i 1 / (lambda_i + epsilon)
double fisher_info(const Spectrum& spec, double epsilon);

/// -sum p ln p over p = lambda / sum(lambda), in nats.
double shannon_entropy(const Spectrum& spec);

std::size_t numerical_rank(const Spectrum& spec, double rel_tol = kDefaultRankTolerance);

struct InfoRecord {
  std::size_t step = 0;
  double fisher = 0.0;
  double entropy = 0.0;
  std::size_t rank = 0;
};

class InfoSeries {
 public:
  /// Throws InvalidParameter unless record.step exceeds the previous step.
  void push(const InfoRecord& record);

  std::span<const InfoRecord> records() const noexcept { return records_; }
  std::size_t size() const noexcept { return records_.size(); }
  bool empty() const noexcept { return records_.empty(); }
  const InfoRecord& back() const { return records_.back(); }

 private:
  std::vector<InfoRecord> records_;
};

InfoRecord info_record(std::size_t step, const Spectrum& spec, double epsilon, double rel_tol = kDefaultRankTolerance);

/// Metrics of C^{-1} built from the first n rows of `design`, for each checkpoint n.
InfoSeries info_series(const DesignMatrix& design, double sigma, double epsilon,
                       std::span<const std::size_t> checkpoints, double rel_tol = kDefaultRankTolerance);

}  // namespace tomolab
