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

#include "tomolab/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <vector>

#include <Eigen/Eigenvalues>

namespace tomolab::linalg {

CMatrix hermitize(const CMatrix& a) { return (a + a.adjoint()) * 0.5; }

RMatrix symmetrize(const RMatrix& a) { return (a + a.transpose()) * 0.5; }

double hermiticity_error(const CMatrix& a) {
  if (a.size() == 0) return 0.0;
  return (a - a.adjoint()).cwiseAbs().maxCoeff();
}

double unitarity_error(const CMatrix& u) {
  if (u.size() == 0) return 0.0;
  return (u.adjoint() * u - CMatrix::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff();
}

double max_abs(const CMatrix& a) { return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff(); }

CMatrix exp_i_hermitian(const CMatrix& h, double t) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitize(h));
  CVector phases(h.rows());
  for (Index i = 0; i < h.rows(); ++i) {
    phases(i) = std::polar(1.0, -t * es.eigenvalues()(i));
  }
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

CMatrix sqrt_psd(const CMatrix& a) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitize(a));
  RVector roots = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * roots.cast<Complex>().asDiagonal() * es.eigenvectors().adjoint();
}

UnitaryEigensystem unitary_eigensystem(const CMatrix& u) {
  Eigen::ComplexSchur<CMatrix> schur(u);
  const CMatrix& t = schur.matrixT();
  const CMatrix& z = schur.matrixU();
  const Index d = u.rows();

  std::vector<double> phase(static_cast<std::size_t>(d));
  for (Index i = 0; i < d; ++i) {
    double p = std::arg(t(i, i));
    // std::arg returns [-pi, pi]; fold -pi onto pi.
    if (p <= -std::numbers::pi) p += 2.0 * std::numbers::pi;
    phase[static_cast<std::size_t>(i)] = p;
  }
  std::vector<Index> order(static_cast<std::size_t>(d));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) {
    return phase[static_cast<std::size_t>(a)] < phase[static_cast<std::size_t>(b)];
  });

  UnitaryEigensystem out{RVector(d), CMatrix(d, d)};
  for (Index i = 0; i < d; ++i) {
    const Index src = order[static_cast<std::size_t>(i)];
    out.phases(i) = phase[static_cast<std::size_t>(src)];
    out.vectors.col(i) = z.col(src);
  }
  return out;
}

}  // namespace tomolab::linalg
