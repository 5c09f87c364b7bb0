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

#include <complex>

#include <Eigen/Dense>

namespace tomolab {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;
using Index = Eigen::Index;

namespace linalg {

/// (A + A^dagger) / 2
CMatrix hermitize(const CMatrix& a);
RMatrix symmetrize(const RMatrix& a);

/// Largest entrywise modulus of A - A^dagger.
double hermiticity_error(const CMatrix& a);

/// Largest entrywise modulus of U^dagger U - I.
double unitarity_error(const CMatrix& u);

double max_abs(const CMatrix& a);

/// exp(-i t H) for Hermitian H, via its spectral decomposition.
CMatrix exp_i_hermitian(const CMatrix& h, double t);

/// Principal square root of a PSD matrix; negative eigenvalues are clipped.
CMatrix sqrt_psd(const CMatrix& a);

struct UnitaryEigensystem {
  RVector phases;   // principal values in (-pi, pi], ascending
  CMatrix vectors;  // orthonormal columns, ordered like phases
};

/// Eigen-decomposition of a unitary (normal) matrix from its complex Schur form,
/// which is diagonal up to roundoff and yields orthonormal eigenvectors.
UnitaryEigensystem unitary_eigensystem(const CMatrix& u);

}  // namespace linalg
}  // namespace tomolab
