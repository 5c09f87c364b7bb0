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

#include "tomolab/ensembles.hpp"

#include <cmath>
#include <numbers>

#include <Eigen/QR>

#include "tomolab/error.hpp"

namespace tomolab {

struct UnitaryAccess {
  static Unitary wrap(CMatrix m) { return Unitary(std::move(m)); }
};

namespace {

constexpr double kDegeneracyGap = 1e-10;

bool has_close_phases(const RVector& sorted_phases) {
  const Index n = sorted_phases.size();
  for (Index i = 1; i < n; ++i) {
    if (sorted_phases(i) - sorted_phases(i - 1) < kDegeneracyGap) return true;
  }
  // Wrap-around neighbours across the branch cut.
  return n > 1 && sorted_phases(0) + 2.0 * std::numbers::pi - sorted_phases(n - 1) < kDegeneracyGap;
}

}  // namespace

Unitary Unitary::from_matrix(CMatrix m, double tolerance) {
  if (m.rows() != m.cols() || m.rows() == 0) throw InvalidDimension("unitary must be square and non-empty");
  if (linalg::unitarity_error(m) > tolerance) throw InvalidParameter("matrix is not unitary");
  return UnitaryAccess::wrap(std::move(m));
}

Unitary Unitary::identity(Index d) {
  if (d < 1) throw InvalidDimension("dimension must be >= 1");
  return Unitary(CMatrix::Identity(d, d));
}

Unitary sample_haar_unitary(Index d, RandomStream& rng) {
  if (d < 1) throw InvalidDimension("dimension must be >= 1");
  CMatrix z(d, d);
  for (Index i = 0; i < d; ++i) {
    for (Index k = 0; k < d; ++k) z(i, k) = rng.complex_normal();
  }
  Eigen::HouseholderQR<CMatrix> qr(z);
  CMatrix q = qr.householderQ() * CMatrix::Identity(d, d);
  const CMatrix& r = qr.matrixQR();
  for (Index i = 0; i < d; ++i) {
    const Complex rii = r(i, i);
    const double mag = std::abs(rii);
    q.col(i) *= mag > 0.0 ? rii / mag : Complex(1.0, 0.0);
  }
  return UnitaryAccess::wrap(std::move(q));
}

Unitary sample_diagonal_unitary(DiagonalProcessState& state, RandomStream& rng) {
  const Index d = state.frame.dim();
  CVector phases(d);
  for (Index j = 0; j < d; ++j) {
    const double phi = rng.uniform(0.0, 2.0 * std::numbers::pi);
    state.accumulated_phases(j) += phi;
    phases(j) = std::polar(1.0, -phi);
  }
  ++state.steps;
  const CMatrix& v = state.frame.matrix();
  return UnitaryAccess::wrap(v * phases.asDiagonal() * v.adjoint());
}

Unitary kicked_top(const KickedTopParams& params) {
  const SpinOperators s = spin_operators(params.j);
  const Index d = s.dim();
  if (d < 2) throw InvalidParameter("kicked top needs j >= 1/2");
  const CMatrix rotation = linalg::exp_i_hermitian(s.jx, KickedTopParams::rotation_angle);
  const double strength = params.k0 / static_cast<double>(d - 1);
  CVector twist(d);
  for (Index i = 0; i < d; ++i) {
    const double m = s.jz(i, i).real();
    twist(i) = std::polar(1.0, -strength * m * m);
  }
  return UnitaryAccess::wrap(rotation * twist.asDiagonal());
}

Unitary parity_operator(double j) {
  const SpinOperators s = spin_operators(j);
  return UnitaryAccess::wrap(linalg::exp_i_hermitian(s.jx, std::numbers::pi));
}

HybridMap hybrid_map(const Unitary& eigvals_from, const Unitary& eigvecs_from) {
  if (eigvals_from.dim() != eigvecs_from.dim()) throw DimensionMismatch("hybrid map inputs differ in dimension");
  const auto a = linalg::unitary_eigensystem(eigvals_from.matrix());
  const auto b = linalg::unitary_eigensystem(eigvecs_from.matrix());
  CVector eig(a.phases.size());
  for (Index i = 0; i < eig.size(); ++i) eig(i) = std::polar(1.0, a.phases(i));
  CMatrix u = b.vectors * eig.asDiagonal() * b.vectors.adjoint();
  return {Unitary::from_matrix(std::move(u), 1e-10), has_close_phases(a.phases) || has_close_phases(b.phases)};
}

std::string describe(const ProcessPolicy& policy) {
  struct Visitor {
    std::string operator()(const policy::HaarPerStep&) const { return "haar"; }
    std::string operator()(const policy::FixedHaarRepeated&) const { return "fixed-haar"; }
    std::string operator()(const policy::DiagonalRandom& p) const {
      return p.frame == FrameChoice::random ? "diagonal(frame=random)" : "diagonal(frame=computational)";
    }
    std::string operator()(const policy::KickedTop& p) const {
      return "kicked-top(j=" + std::to_string(p.params.j) + ",k0=" + std::to_string(p.params.k0) + ")";
    }
    std::string operator()(const policy::HybridEigenSwap& p) const {
      return "hybrid(eigenvalues k0=" + std::to_string(p.eigenvalues_from.k0) +
             ",eigenvectors k0=" + std::to_string(p.eigenvectors_from.k0) + ")";
    }
  };
  return std::visit(Visitor{}, policy);
}

std::optional<Index> forced_dimension(const ProcessPolicy& policy) {
  if (const auto* kt = std::get_if<policy::KickedTop>(&policy)) return spin_dimension(kt->params.j);
  if (const auto* hy = std::get_if<policy::HybridEigenSwap>(&policy)) {
    const Index a = spin_dimension(hy->eigenvalues_from.j);
    if (spin_dimension(hy->eigenvectors_from.j) != a) {
      throw InvalidParameter("hybrid sources must share the same spin j");
    }
    return a;
  }
  return std::nullopt;
}

UnitaryProcess::UnitaryProcess(ProcessPolicy policy, Index dim, RandomStream rng)
    : policy_(std::move(policy)), dim_(dim), rng_(std::move(rng)) {
  if (dim_ < 1) throw InvalidDimension("process dimension must be >= 1");
  if (auto forced = forced_dimension(policy_); forced && *forced != dim_) {
    throw DimensionMismatch("kicked-top dimension 2j+1 = " + std::to_string(*forced) +
                            " does not match process dimension " + std::to_string(dim_));
  }
  if (std::holds_alternative<policy::FixedHaarRepeated>(policy_)) {
    fixed_ = sample_haar_unitary(dim_, rng_);
  } else if (const auto* diag = std::get_if<policy::DiagonalRandom>(&policy_)) {
    diagonal_.emplace(diag->frame == FrameChoice::random ? sample_haar_unitary(dim_, rng_) : Unitary::identity(dim_));
  } else if (const auto* kt = std::get_if<policy::KickedTop>(&policy_)) {
    fixed_ = kicked_top(kt->params);
  } else if (const auto* hy = std::get_if<policy::HybridEigenSwap>(&policy_)) {
    HybridMap h = hybrid_map(kicked_top(hy->eigenvalues_from), kicked_top(hy->eigenvectors_from));
    near_degenerate_ = h.near_degenerate;
    fixed_ = std::move(h.unitary);
  }
}

Unitary UnitaryProcess::next() {
  ++steps_;
  if (fixed_) return *fixed_;
  if (diagonal_) return sample_diagonal_unitary(*diagonal_, rng_);
  return sample_haar_unitary(dim_, rng_);
}

}  // namespace tomolab
