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

#include <span>
#include <vector>

#include "tomolab/linalg.hpp"
#include "tomolab/random.hpp"

namespace tomolab {

inline constexpr double kHermitianTolerance = 1e-12;
inline constexpr double kTraceTolerance = 1e-12;
inline constexpr double kPsdTolerance = 1e-10;

/// Hermitian, unit-trace, positive semidefinite d x d matrix.
class DensityMatrix {
 public:
  /// Validates every invariant and throws InvalidParameter on violation.
  static DensityMatrix from_matrix(CMatrix m);

  /// Pure state |psi><psi| of a normalized vector.
  static DensityMatrix from_pure(const CVector& psi);

  static DensityMatrix maximally_mixed(Index d);

  const CMatrix& matrix() const noexcept { return m_; }
  Index dim() const noexcept { return m_.rows(); }
  double purity() const;

 private:
  explicit DensityMatrix(CMatrix m) : m_(std::move(m)) {}
  CMatrix m_;
};

/// Hermitian d x d matrix.
class Observable {
 public:
  static Observable from_matrix(CMatrix m);

  const CMatrix& matrix() const noexcept { return m_; }
  Index dim() const noexcept { return m_.rows(); }
  double trace() const { return m_.trace().real(); }
  /// Tr(O^2)
  double squared_norm() const { return m_.squaredNorm(); }

 private:
  explicit Observable(CMatrix m) : m_(std::move(m)) {}
  CMatrix m_;
};

/// Components r_alpha = Tr(A E_alpha) of a Hermitian operator in an OperatorBasis.
struct BlochVector {
  Index dim = 0;
  RVector components;

  double squared_length() const { return components.squaredNorm(); }
};

/// Orthonormal traceless Hermitian basis of su(d), generalized Gell-Mann family.
///
/// Ordering: the d(d-1)/2 symmetric pairs (|j><k| + |k><j|)/sqrt2 for j < k in
/// row-major order, then the antisymmetric pairs (-i|j><k| + i|k><j|)/sqrt2 in the
/// same order, then the d-1 diagonal elements
/// (sum_{m<l} |m><m| - l|l><l|)/sqrt(l(l+1)), l = 1..d-1.
class OperatorBasis {
 public:
  Index dim() const noexcept { return dim_; }
  Index size() const noexcept { return static_cast<Index>(elements_.size()); }
  const CMatrix& operator[](Index alpha) const { return elements_[static_cast<std::size_t>(alpha)]; }
  std::span<const CMatrix> elements() const noexcept { return elements_; }

  /// Tr(A E_alpha) for every alpha using the sparsity of the Gell-Mann family;
  /// A must be Hermitian. O(d^2) per call.
  RVector coefficients(const CMatrix& a) const;
  void coefficients_into(const CMatrix& a, Eigen::Ref<RVector> out) const;

  /// sum_alpha r_alpha E_alpha + (trace / d) I
  CMatrix compose(const RVector& r, double trace) const;

 private:
  friend OperatorBasis make_hermitian_basis(Index d);
  Index dim_ = 0;
  std::vector<CMatrix> elements_;
};

OperatorBasis make_hermitian_basis(Index d);

/// Spin-j angular momentum matrices in the Jz eigenbasis, rows ordered m = j, j-1, ..., -j.
struct SpinOperators {
  double j = 0.0;
  CMatrix jx, jy, jz;

  Index dim() const noexcept { return jz.rows(); }
};

SpinOperators spin_operators(double j);

/// Validates that 2j is a non-negative integer and returns 2j + 1.
Index spin_dimension(double j);

DensityMatrix sample_pure_state(Index d, RandomStream& rng);
DensityMatrix sample_mixed_state(Index d, RandomStream& rng);

/// Uhlmann fidelity (Tr sqrt(sqrt(rho) sigma sqrt(rho)))^2, clamped to [0, 1].
double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma);

BlochVector bloch_decompose(const Observable& a, const OperatorBasis& basis);
BlochVector bloch_decompose(const DensityMatrix& rho, const OperatorBasis& basis);

/// sum_alpha r_alpha E_alpha + I/d, returned unvalidated (may be unphysical).
CMatrix bloch_compose(const BlochVector& r, const OperatorBasis& basis);

}  // namespace tomolab
