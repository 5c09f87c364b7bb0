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

#include "tomolab/qcore.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include <Eigen/Eigenvalues>

#include "tomolab/error.hpp"

namespace tomolab {

namespace {

constexpr double kInvSqrt2 = 1.0 / std::numbers::sqrt2;

void require_square(const CMatrix& m, const char* what) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw InvalidDimension(std::string(what) + " must be a non-empty square matrix");
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// DensityMatrix / Observable

DensityMatrix DensityMatrix::from_matrix(CMatrix m) {
  require_square(m, "density matrix");
  if (linalg::hermiticity_error(m) > kHermitianTolerance) {
    throw InvalidParameter("density matrix is not Hermitian");
  }
  if (std::abs(m.trace().real() - 1.0) > kTraceTolerance || std::abs(m.trace().imag()) > kTraceTolerance) {
    throw InvalidParameter("density matrix trace differs from 1");
  }
  Eigen::SelfAdjointEigenSolver<CMatrix> es(linalg::hermitize(m), Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -kPsdTolerance) {
    throw InvalidParameter("density matrix has a negative eigenvalue");
  }
  return DensityMatrix(std::move(m));
}

DensityMatrix DensityMatrix::from_pure(const CVector& psi) {
  const double norm = psi.norm();
  if (psi.size() == 0 || norm == 0.0) throw InvalidParameter("state vector must be non-zero");
  const CVector v = psi / norm;
  return DensityMatrix(linalg::hermitize(v * v.adjoint()));
}

DensityMatrix DensityMatrix::maximally_mixed(Index d) {
  if (d < 1) throw InvalidDimension("dimension must be >= 1");
  return DensityMatrix(CMatrix::Identity(d, d) / static_cast<double>(d));
}

double DensityMatrix::purity() const { return m_.squaredNorm(); }

Observable Observable::from_matrix(CMatrix m) {
  require_square(m, "observable");
  if (linalg::hermiticity_error(m) > kHermitianTolerance) {
    throw InvalidParameter("observable is not Hermitian");
  }
  return Observable(std::move(m));
}

// ---------------------------------------------------------------------------
// OperatorBasis

OperatorBasis make_hermitian_basis(Index d) {
  if (d < 2) throw InvalidDimension("operator basis needs d >= 2, got " + std::to_string(d));
  OperatorBasis basis;
  basis.dim_ = d;
  basis.elements_.reserve(static_cast<std::size_t>(d * d - 1));
  for (Index j = 0; j < d; ++j) {
    for (Index k = j + 1; k < d; ++k) {
      CMatrix e = CMatrix::Zero(d, d);
      e(j, k) = kInvSqrt2;
      e(k, j) = kInvSqrt2;
      basis.elements_.push_back(std::move(e));
    }
  }
  for (Index j = 0; j < d; ++j) {
    for (Index k = j + 1; k < d; ++k) {
      CMatrix e = CMatrix::Zero(d, d);
      e(j, k) = Complex(0.0, -kInvSqrt2);
      e(k, j) = Complex(0.0, kInvSqrt2);
      basis.elements_.push_back(std::move(e));
    }
  }
  for (Index l = 1; l < d; ++l) {
    const double norm = 1.0 / std::sqrt(static_cast<double>(l * (l + 1)));
    CMatrix e = CMatrix::Zero(d, d);
    for (Index m = 0; m < l; ++m) e(m, m) = norm;
    e(l, l) = -static_cast<double>(l) * norm;
    basis.elements_.push_back(std::move(e));
  }
  return basis;
}

void OperatorBasis::coefficients_into(const CMatrix& a, Eigen::Ref<RVector> out) const {
  if (a.rows() != dim_ || a.cols() != dim_) {
    throw DimensionMismatch("operator dimension does not match basis");
  }
  const Index d = dim_;
  const Index pairs = d * (d - 1) / 2;
  Index sym = 0;
  Index anti = pairs;
  for (Index j = 0; j < d; ++j) {
    for (Index k = j + 1; k < d; ++k) {
      const Complex ajk = a(j, k);
      out(sym++) = std::numbers::sqrt2 * ajk.real();
      out(anti++) = -std::numbers::sqrt2 * ajk.imag();
    }
  }
  Index idx = 2 * pairs;
  double prefix = 0.0;
  for (Index l = 1; l < d; ++l) {
    prefix += a(l - 1, l - 1).real();
    const double ll = static_cast<double>(l);
    out(idx++) = (prefix - ll * a(l, l).real()) / std::sqrt(ll * (ll + 1.0));
  }
}

RVector OperatorBasis::coefficients(const CMatrix& a) const {
  RVector out(size());
  coefficients_into(a, out);
  return out;
}

CMatrix OperatorBasis::compose(const RVector& r, double trace) const {
  if (r.size() != size()) throw DimensionMismatch("Bloch vector length does not match basis");
  const Index d = dim_;
  const Index pairs = d * (d - 1) / 2;
  CMatrix out(d, d);
  Index sym = 0;
  Index anti = pairs;
  for (Index j = 0; j < d; ++j) {
    for (Index k = j + 1; k < d; ++k) {
      const Complex ajk(r(sym++) * kInvSqrt2, -r(anti++) * kInvSqrt2);
      out(j, k) = ajk;
      out(k, j) = std::conj(ajk);
    }
  }
  // Diagonal element l contributes 1/sqrt(l(l+1)) to rows m < l and -l/sqrt(l(l+1)) to row l.
  double suffix = 0.0;
  const double base = trace / static_cast<double>(d);
  for (Index m = d - 1; m >= 0; --m) {
    double value = base + suffix;
    if (m >= 1) {
      const double mm = static_cast<double>(m);
      const double rl = r(2 * pairs + m - 1) / std::sqrt(mm * (mm + 1.0));
      value -= mm * rl;
      suffix += rl;
    }
    out(m, m) = value;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Spin operators

Index spin_dimension(double j) {
  const double twice = 2.0 * j;
  const double rounded = std::round(twice);
  if (!std::isfinite(j) || j < 0.0 || std::abs(twice - rounded) > 1e-12) {
    throw InvalidParameter("spin j must be a non-negative half-integer, got " + std::to_string(j));
  }
  return static_cast<Index>(rounded) + 1;
}

SpinOperators spin_operators(double j) {
  const Index d = spin_dimension(j);
  const double jj = static_cast<double>(d - 1) / 2.0;
  SpinOperators s;
  s.j = jj;
  s.jz = CMatrix::Zero(d, d);
  CMatrix raise = CMatrix::Zero(d, d);
  for (Index i = 0; i < d; ++i) {
    const double m = jj - static_cast<double>(i);
    s.jz(i, i) = m;
    // J+ |m> = sqrt(j(j+1) - m(m+1)) |m+1>; |m+1> sits one row above |m>.
    if (i > 0) raise(i - 1, i) = std::sqrt(jj * (jj + 1.0) - m * (m + 1.0));
  }
  const CMatrix lower = raise.adjoint();
  s.jx = (raise + lower) * 0.5;
  s.jy = (raise - lower) * Complex(0.0, -0.5);
  return s;
}

// ---------------------------------------------------------------------------
// Sampling

DensityMatrix sample_pure_state(Index d, RandomStream& rng) {
  if (d < 1) throw InvalidDimension("dimension must be >= 1");
  CVector psi(d);
  for (Index i = 0; i < d; ++i) psi(i) = rng.complex_normal();
  return DensityMatrix::from_pure(psi);
}

DensityMatrix sample_mixed_state(Index d, RandomStream& rng) {
  if (d < 2) throw InvalidDimension("mixed-state sampling needs d >= 2");
  CMatrix g(d, d);
  for (Index i = 0; i < d; ++i) {
    for (Index k = 0; k < d; ++k) g(i, k) = rng.complex_normal();
  }
  CMatrix rho = linalg::hermitize(g * g.adjoint());
  rho /= rho.trace().real();
  return DensityMatrix::from_matrix(std::move(rho));
}

// ---------------------------------------------------------------------------
// Fidelity and Bloch vectors

double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma) {
  if (rho.dim() != sigma.dim()) throw DimensionMismatch("fidelity of states with different dimensions");
  const CMatrix root = linalg::sqrt_psd(rho.matrix());
  const CMatrix inner = linalg::hermitize(root * sigma.matrix() * root);
  Eigen::SelfAdjointEigenSolver<CMatrix> es(inner, Eigen::EigenvaluesOnly);
  // Round-off eigenvalues of a rank-deficient product would otherwise add O(sqrt(eps)) each.
  const double floor = 64.0 * std::numeric_limits<double>::epsilon() * std::max(es.eigenvalues().maxCoeff(), 0.0);
  double tr = 0.0;
  for (Index i = 0; i < es.eigenvalues().size(); ++i) {
    if (es.eigenvalues()(i) > floor) tr += std::sqrt(es.eigenvalues()(i));
  }
  return std::clamp(tr * tr, 0.0, 1.0);
}

BlochVector bloch_decompose(const Observable& a, const OperatorBasis& basis) {
  return {basis.dim(), basis.coefficients(a.matrix())};
}

BlochVector bloch_decompose(const DensityMatrix& rho, const OperatorBasis& basis) {
  return {basis.dim(), basis.coefficients(rho.matrix())};
}

CMatrix bloch_compose(const BlochVector& r, const OperatorBasis& basis) {
  if (r.dim != basis.dim()) throw DimensionMismatch("Bloch vector dimension does not match basis");
  return basis.compose(r.components, 1.0);
}

}  // namespace tomolab
