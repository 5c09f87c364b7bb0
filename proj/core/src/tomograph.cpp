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

#include "tomolab/tomograph.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include "tomolab/error.hpp"

namespace tomolab {

namespace {

constexpr double kRankTolerance = 1e-10;
constexpr std::size_t kStreamBlock = 512;

void require_sigma(double sigma) {
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) throw InvalidParameter("sigma must be finite and >= 0");
}

void require_epsilon(double epsilon) {
  if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) throw InvalidParameter("epsilon must be finite and >= 0");
}

Index dim_from_cols(Index cols) {
  const auto d = static_cast<Index>(std::llround(std::sqrt(static_cast<double>(cols + 1))));
  if (d * d - 1 != cols) throw DimensionMismatch("column count is not d^2 - 1");
  return d;
}

/// Minimum-norm solution of gram x = b restricted to the numerically non-null space.
RVector pseudo_solve(const RMatrix& gram, const RVector& b) {
  Eigen::SelfAdjointEigenSolver<RMatrix> es(gram);
  const RVector& w = es.eigenvalues();
  const double top = w.size() ? std::max(w.maxCoeff(), 0.0) : 0.0;
  RVector coeff = es.eigenvectors().transpose() * b;
  for (Index i = 0; i < w.size(); ++i) {
    coeff(i) = (top > 0.0 && w(i) > kRankTolerance * top) ? coeff(i) / w(i) : 0.0;
  }
  return es.eigenvectors() * coeff;
}

}  // namespace

// ---------------------------------------------------------------------------
// Trajectories and design matrices

Observable evolve_observable(const Observable& o, const Unitary& u) {
  if (o.dim() != u.dim()) throw DimensionMismatch("observable and unitary differ in dimension");
  return Observable::from_matrix(linalg::hermitize(u.matrix().adjoint() * o.matrix() * u.matrix()));
}

ObservableTrajectory run_trajectory(const Observable& o0, UnitaryProcess& process, std::size_t steps) {
  if (steps < 1) throw InvalidParameter("trajectory needs at least one step");
  if (o0.dim() != process.dim()) throw DimensionMismatch("observable and process differ in dimension");
  ObservableTrajectory traj{o0, {}, describe(process.policy())};
  traj.observables.reserve(steps);
  Observable current = o0;
  for (std::size_t n = 0; n < steps; ++n) {
    current = evolve_observable(current, process.next());
    traj.observables.push_back(current);
  }
  return traj;
}

DesignMatrix design_matrix(const ObservableTrajectory& trajectory, const OperatorBasis& basis) {
  if (trajectory.initial.dim() != basis.dim()) throw DimensionMismatch("trajectory and basis differ in dimension");
  RMatrix values(static_cast<Index>(trajectory.size()), basis.size());
  for (std::size_t n = 0; n < trajectory.size(); ++n) {
    RVector row(basis.size());
    basis.coefficients_into(trajectory.observables[n].matrix(), row);
    values.row(static_cast<Index>(n)) = row.transpose();
  }
  return DesignMatrix(std::move(values));
}

MeasurementRecord synth_record(const DesignMatrix& design, const BlochVector& r_true, double sigma,
                               RandomStream& rng) {
  if (!(sigma >= 0.0)) throw InvalidParameter("sigma must be >= 0");
  if (r_true.components.size() != design.cols()) throw DimensionMismatch("Bloch vector does not match design");
  MeasurementRecord record{design.values() * r_true.components, sigma, rng.seed()};
  for (Index n = 0; n < record.values.size(); ++n) record.values(n) += sigma * rng.normal();
  return record;
}

// ---------------------------------------------------------------------------
// Inverse covariance

InverseCovariance InverseCovariance::from_matrix(RMatrix m) {
  if (m.rows() != m.cols()) throw InvalidDimension("inverse covariance must be square");
  if (m.size() > 0) {
    const double scale = std::max(m.cwiseAbs().maxCoeff(), std::numeric_limits<double>::min());
    if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale) {
      throw InvalidParameter("inverse covariance is not symmetric");
    }
  }
  return InverseCovariance(linalg::symmetrize(m));
}

InverseCovariance inverse_covariance(const DesignMatrix& design, double sigma) {
  if (!(sigma > 0.0)) throw InvalidParameter("inverse covariance needs sigma > 0");
  RMatrix g = RMatrix::Zero(design.cols(), design.cols());
  g.selfadjointView<Eigen::Lower>().rankUpdate(design.values().transpose(), 1.0 / (sigma * sigma));
  return InverseCovariance::from_matrix(g.selfadjointView<Eigen::Lower>());
}

NormalEquations::NormalEquations(Index cols) : gram_(RMatrix::Zero(cols, cols)), moment_(RVector::Zero(cols)) {}

void NormalEquations::add_rows(const Eigen::Ref<const RMatrix>& rows, const Eigen::Ref<const RVector>& record) {
  if (rows.cols() != cols() || record.size() != rows.rows()) throw DimensionMismatch("row block shape mismatch");
  add_rows(rows);
  moment_.noalias() += rows.transpose() * record;
}

void NormalEquations::add_rows(const Eigen::Ref<const RMatrix>& rows) {
  if (rows.cols() != cols()) throw DimensionMismatch("row block shape mismatch");
  gram_.noalias() += rows.transpose() * rows;
  gram_ = linalg::symmetrize(gram_);
  rows_ += static_cast<std::size_t>(rows.rows());
}

InverseCovariance NormalEquations::inverse_covariance(double sigma) const {
  if (!(sigma > 0.0)) throw InvalidParameter("inverse covariance needs sigma > 0");
  return InverseCovariance::from_matrix(gram_ / (sigma * sigma));
}

NormalEquations stream_normal_equations(const Observable& o0, UnitaryProcess& process, std::size_t steps,
                                        const OperatorBasis& basis) {
  if (o0.dim() != basis.dim() || o0.dim() != process.dim()) {
    throw DimensionMismatch("observable, process and basis must share one dimension");
  }
  NormalEquations normal(basis.size());
  RMatrix block(static_cast<Index>(std::min(kStreamBlock, std::max<std::size_t>(steps, 1))), basis.size());
  Observable current = o0;
  Index filled = 0;
  for (std::size_t n = 0; n < steps; ++n) {
    current = evolve_observable(current, process.next());
    RVector row(basis.size());
    basis.coefficients_into(current.matrix(), row);
    block.row(filled++) = row.transpose();
    if (filled == block.rows()) {
      normal.add_rows(block);
      filled = 0;
    }
  }
  if (filled > 0) normal.add_rows(block.topRows(filled));
  return normal;
}

std::size_t gram_rank(const RMatrix& gram, double rel_tol) {
  if (gram.size() == 0) return 0;
  Eigen::SelfAdjointEigenSolver<RMatrix> es(gram, Eigen::EigenvaluesOnly);
  const RVector& w = es.eigenvalues();
  const double top = w.maxCoeff();
  if (!(top > 0.0)) return 0;
  return static_cast<std::size_t>((w.array() > rel_tol * top).count());
}

// ---------------------------------------------------------------------------
// Maximum-likelihood estimation

BlochVector ml_estimate(const DesignMatrix& design, const MeasurementRecord& record, double sigma,
                        double epsilon) {
  require_sigma(sigma);
  require_epsilon(epsilon);
  if (record.values.size() != design.rows()) throw DimensionMismatch("record length does not match design rows");
  const Index cols = design.cols();
  const Index d = dim_from_cols(cols);
  const RMatrix& a = design.values();

  if (epsilon == 0.0 || sigma == 0.0) {
    RMatrix gram = RMatrix::Zero(cols, cols);
    gram.selfadjointView<Eigen::Lower>().rankUpdate(a.transpose());
    const std::size_t rank = gram_rank(gram.selfadjointView<Eigen::Lower>(), kRankTolerance);
    const auto full = static_cast<std::size_t>(cols);
    if (rank < full) {
      if (epsilon == 0.0) throw RankDeficient(full - rank, full);
      // sigma -> 0 limit of the Tikhonov solution: minimum-norm least squares.
      Eigen::CompleteOrthogonalDecomposition<RMatrix> cod(a);
      cod.setThreshold(std::sqrt(kRankTolerance));
      return {d, cod.solve(record.values)};
    }
    Eigen::ColPivHouseholderQR<RMatrix> qr(a);
    return {d, qr.solve(record.values)};
  }

  // [O~ / sigma; sqrt(eps) I] r = [M / sigma; 0]
  RMatrix stacked(a.rows() + cols, cols);
  stacked.topRows(a.rows()) = a / sigma;
  stacked.bottomRows(cols) = RMatrix::Identity(cols, cols) * std::sqrt(epsilon);
  RVector rhs = RVector::Zero(a.rows() + cols);
  rhs.head(a.rows()) = record.values / sigma;
  Eigen::HouseholderQR<RMatrix> qr(stacked);
  return {d, qr.solve(rhs)};
}

BlochVector ml_estimate(const NormalEquations& normal, double sigma, double epsilon, Index dim) {
  require_sigma(sigma);
  require_epsilon(epsilon);
  const Index cols = normal.cols();
  if (dim * dim - 1 != cols) throw DimensionMismatch("dimension does not match normal equations");

  if (epsilon == 0.0 || sigma == 0.0) {
    const std::size_t rank = gram_rank(normal.gram(), kRankTolerance);
    const auto full = static_cast<std::size_t>(cols);
    if (rank < full) {
      if (epsilon == 0.0) throw RankDeficient(full - rank, full);
      return {dim, pseudo_solve(normal.gram(), normal.moment())};
    }
    Eigen::LLT<RMatrix> llt(normal.gram());
    if (llt.info() != Eigen::Success) return {dim, pseudo_solve(normal.gram(), normal.moment())};
    return {dim, llt.solve(normal.moment())};
  }

  const double inv_var = 1.0 / (sigma * sigma);
  RMatrix system = normal.gram() * inv_var;
  system.diagonal().array() += epsilon;
  Eigen::LLT<RMatrix> llt(system);
  if (llt.info() != Eigen::Success) throw DomainError("regularized normal matrix is not positive definite");
  return {dim, llt.solve(normal.moment() * inv_var)};
}

// ---------------------------------------------------------------------------
// Physical projection

RVector project_to_simplex(const RVector& v) {
  const Index n = v.size();
  if (n == 0) return v;
  std::vector<double> sorted(v.data(), v.data() + n);
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  double cumulative = 0.0;
  double theta = 0.0;
  for (Index i = 0; i < n; ++i) {
    cumulative += sorted[static_cast<std::size_t>(i)];
    const double candidate = (cumulative - 1.0) / static_cast<double>(i + 1);
    if (sorted[static_cast<std::size_t>(i)] - candidate > 0.0) theta = candidate;
  }
  return (v.array() - theta).cwiseMax(0.0);
}

CMatrix nearest_density_matrix(const CMatrix& hermitian) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(linalg::hermitize(hermitian));
  const RVector w = project_to_simplex(es.eigenvalues());
  return linalg::hermitize(es.eigenvectors() * w.cast<Complex>().asDiagonal() * es.eigenvectors().adjoint());
}

ProjectionResult project_physical(const BlochVector& r_ml, const InverseCovariance& weight,
                                  const OperatorBasis& basis, const ProjectionOptions& options) {
  const Index n = basis.size();
  if (r_ml.dim != basis.dim() || r_ml.components.size() != n || weight.dim() != n) {
    throw DimensionMismatch("projection inputs differ in dimension");
  }
  const RMatrix& w = weight.matrix();
  const RVector& target = r_ml.components;

  auto objective = [&](const RVector& x) {
    const RVector diff = x - target;
    return diff.dot(w * diff);
  };
  auto project = [&](const RVector& x) { return basis.coefficients(nearest_density_matrix(basis.compose(x, 1.0))); };
  auto finish = [&](const RVector& x, int iterations, bool converged) {
    CMatrix rho = linalg::hermitize(basis.compose(x, 1.0));
    rho.diagonal().array() += Complex((1.0 - rho.trace().real()) / static_cast<double>(basis.dim()), 0.0);
    return ProjectionResult{DensityMatrix::from_matrix(std::move(rho)), BlochVector{basis.dim(), x}, objective(x),
                            iterations, converged};
  };

  {
    const CMatrix rho_ml = linalg::hermitize(basis.compose(target, 1.0));
    Eigen::SelfAdjointEigenSolver<CMatrix> es(rho_ml, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() >= -kPsdTolerance) return finish(target, 0, true);
  }

  RVector x = project(target);
  Eigen::SelfAdjointEigenSolver<RMatrix> top(w, Eigen::EigenvaluesOnly);
  const double lipschitz = top.eigenvalues().size() ? top.eigenvalues().maxCoeff() : 0.0;
  if (!(lipschitz > 0.0)) return finish(x, 0, true);

  RVector y = x;
  double t = 1.0;
  double f_prev = objective(x);
  int it = 0;
  bool converged = false;
  while (it < options.max_iterations) {
    ++it;
    RVector x_next = project(y - w * (y - target) / lipschitz);
    const double f_next = objective(x_next);
    if (f_next > f_prev) {
      if (t == 1.0) {
        // A plain gradient step from the accepted iterate no longer descends.
        converged = true;
        break;
      }
      // Momentum overshot: restart from the last accepted iterate.
      y = x;
      t = 1.0;
      continue;
    }
    const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
    y = x_next + ((t - 1.0) / t_next) * (x_next - x);
    const double rel_change = (f_prev - f_next) / std::max(f_prev, std::numeric_limits<double>::min());
    x = std::move(x_next);
    t = t_next;
    f_prev = f_next;
    if (rel_change < options.rel_tol) {
      converged = true;
      break;
    }
  }
  return finish(x, it, converged);
}

}  // namespace tomolab
