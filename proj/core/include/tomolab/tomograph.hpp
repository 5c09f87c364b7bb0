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

#include <cstdint>
#include <string>
#include <vector>

#include "tomolab/ensembles.hpp"
#include "tomolab/linalg.hpp"
#include "tomolab/qcore.hpp"
#include "tomolab/random.hpp"

namespace tomolab {

/// O_1..O_N produced by conjugating O_0 with successive step unitaries.
struct ObservableTrajectory {
  Observable initial;
  std::vector<Observable> observables;
  std::string process;

  std::size_t size() const noexcept { return observables.size(); }
};

/// U^dagger O U, re-Hermitized.
Observable evolve_observable(const Observable& o, const Unitary& u);

ObservableTrajectory run_trajectory(const Observable& o0, UnitaryProcess& process, std::size_t steps);

/// N x (d^2 - 1) matrix of overlaps Tr(O_n E_alpha).
class DesignMatrix {
 public:
  DesignMatrix() = default;
  explicit DesignMatrix(RMatrix values) : values_(std::move(values)) {}

  Index rows() const noexcept { return values_.rows(); }
  Index cols() const noexcept { return values_.cols(); }
  const RMatrix& values() const noexcept { return values_; }

 private:
  RMatrix values_;
};

DesignMatrix design_matrix(const ObservableTrajectory& trajectory, const OperatorBasis& basis);

struct MeasurementRecord {
  RVector values;
  double sigma = 0.0;
  std::uint64_t seed = 0;  // seed of the stream that produced the noise
};

/// M = O~ r + sigma w with w iid N(0, 1).
MeasurementRecord synth_record(const DesignMatrix& design, const BlochVector& r_true, double sigma,
                               RandomStream& rng);

/// C^{-1} = O~^T O~ / sigma^2. Symmetric by construction; PSD because it is a Gram matrix.
class InverseCovariance {
 public:
  InverseCovariance() = default;
  /// Symmetrizes after checking |A - A^T| <= 1e-10 relative to max |A|.
  static InverseCovariance from_matrix(RMatrix m);

  const RMatrix& matrix() const noexcept { return m_; }
  Index dim() const noexcept { return m_.rows(); }
  double trace() const { return m_.trace(); }

 private:
  explicit InverseCovariance(RMatrix m) : m_(std::move(m)) {}
  RMatrix m_;
};

InverseCovariance inverse_covariance(const DesignMatrix& design, double sigma);

/// Running O~^T O~ and O~^T M accumulated row block by row block.
class NormalEquations {
 public:
  explicit NormalEquations(Index cols);

  void add_rows(const Eigen::Ref<const RMatrix>& rows, const Eigen::Ref<const RVector>& record);
  void add_rows(const Eigen::Ref<const RMatrix>& rows);

  Index cols() const noexcept { return gram_.rows(); }
  std::size_t rows() const noexcept { return rows_; }
  /// Full symmetric O~^T O~.
  const RMatrix& gram() const noexcept { return gram_; }
  const RVector& moment() const noexcept { return moment_; }

  InverseCovariance inverse_covariance(double sigma) const;

 private:
  RMatrix gram_;
  RVector moment_;
  std::size_t rows_ = 0;
};

/// Streams `steps` evolved observables straight into a Gram matrix without storing them.
NormalEquations stream_normal_equations(const Observable& o0, UnitaryProcess& process, std::size_t steps,
                                        const OperatorBasis& basis);

/// Number of eigenvalues of a symmetric PSD matrix above rel_tol times the largest.
std::size_t gram_rank(const RMatrix& gram, double rel_tol = 1e-10);

/// Tikhonov-regularized maximum-likelihood Bloch vector
///   r = (O~^T O~ / sigma^2 + epsilon I)^{-1} O~^T M / sigma^2.
/// epsilon = 0 requires full rank (RankDeficient otherwise). sigma = 0 takes the
/// noiseless limit, which is the minimum-norm least-squares solution.
/// This overload factors the stacked system [O~/sigma; sqrt(epsilon) I] by QR.
BlochVector ml_estimate(const DesignMatrix& design, const MeasurementRecord& record, double sigma,
                        double epsilon);

/// Same estimator from accumulated normal equations (Cholesky of the regularized Gram).
BlochVector ml_estimate(const NormalEquations& normal, double sigma, double epsilon, Index dim);

struct ProjectionOptions {
  double rel_tol = 1e-10;
  int max_iterations = 10000;
};

struct ProjectionResult {
  DensityMatrix state;
  BlochVector bloch;
  double objective = 0.0;  // (r_ML - r)^T W (r_ML - r)
  int iterations = 0;
  bool converged = false;
};

/// Closest physical state to r_ML in the metric W: accelerated projected gradient
/// with monotone restarts. Each projection is the exact Frobenius projection onto
/// unit-trace PSD matrices (eigenvalues projected onto the probability simplex).
ProjectionResult project_physical(const BlochVector& r_ml, const InverseCovariance& weight,
                                  const OperatorBasis& basis, const ProjectionOptions& options = {});

/// Frobenius-nearest density matrix to a Hermitian matrix (used by project_physical).
CMatrix nearest_density_matrix(const CMatrix& hermitian);

/// Euclidean projection of v onto {x >= 0, sum x = 1}.
RVector project_to_simplex(const RVector& v);

}  // namespace tomolab
