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

#include <cmath>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "tomolab/error.hpp"
#include "tomolab/infometrics.hpp"
#include "tomolab/reconstruct.hpp"
#include "tomolab/tomograph.hpp"

namespace tomolab {
namespace {

Observable jx(Index d) { return Observable::from_matrix(spin_operators(0.5 * static_cast<double>(d - 1)).jx); }

DesignMatrix run_design(const ProcessPolicy& p, Index d, std::size_t n, std::uint64_t seed,
                        const Observable* o0 = nullptr) {
  UnitaryProcess proc(p, d, RandomStream(seed));
  const Observable o = o0 ? *o0 : jx(d);
  return design_matrix(run_trajectory(o, proc, n), make_hermitian_basis(d));
}

std::size_t rank_of(const DesignMatrix& m) {
  return numerical_rank(spectrum(inverse_covariance(m, 1.0)));
}

// -- evolution ---------------------------------------------------------------

TEST(Evolve, IdentityAndConservation) {
  RandomStream rng(1);
  const Observable o = Observable::from_matrix(oracle::random_hermitian(5, rng));
  const Observable same = evolve_observable(o, Unitary::identity(5));
  EXPECT_LT((same.matrix() - o.matrix()).cwiseAbs().maxCoeff(), 1e-15);
  const Observable e = evolve_observable(o, sample_haar_unitary(5, rng));
  EXPECT_NEAR(e.trace(), o.trace(), 1e-10);
  EXPECT_NEAR(e.squared_norm(), o.squared_norm(), 1e-10);
  EXPECT_THROW(evolve_observable(o, Unitary::identity(4)), DimensionMismatch);
}

TEST(Evolve, DiagonalStepKeepsDiagonalInComputationalFrame) {
  RandomStream rng(2);
  const Observable o = Observable::from_matrix(oracle::random_hermitian(4, rng));
  DiagonalProcessState state(Unitary::identity(4));
  const Observable e = evolve_observable(o, sample_diagonal_unitary(state, rng));
  EXPECT_LT((e.matrix().diagonal() - o.matrix().diagonal()).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Trajectory, ConservesTraceInvariants) {
  const Observable o = jx(6);
  for (const ProcessPolicy& p : {ProcessPolicy{policy::HaarPerStep{}}, ProcessPolicy{policy::DiagonalRandom{}},
                                 ProcessPolicy{policy::FixedHaarRepeated{}}}) {
    UnitaryProcess proc(p, 6, RandomStream(3));
    const ObservableTrajectory t = run_trajectory(o, proc, 300);
    ASSERT_EQ(t.size(), 300u);
    for (const auto& on : t.observables) {
      EXPECT_LT(linalg::hermiticity_error(on.matrix()), 1e-12);
      EXPECT_NEAR(on.trace(), o.trace(), 1e-10);
      EXPECT_NEAR(on.squared_norm(), o.squared_norm(), 1e-10);
    }
  }
}

TEST(Trajectory, SingleHaarStepIsOneConjugation) {
  const Observable o = jx(3);
  UnitaryProcess proc(policy::HaarPerStep{}, 3, RandomStream(4));
  UnitaryProcess twin(policy::HaarPerStep{}, 3, RandomStream(4));
  const ObservableTrajectory t = run_trajectory(o, proc, 1);
  const CMatrix u = twin.next().matrix();
  EXPECT_LT((t.observables[0].matrix() - u.adjoint() * o.matrix() * u).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(Trajectory, DiagonalEnsemblePreservesFrameDiagonal) {
  const Observable o = jx(5);
  UnitaryProcess proc(policy::DiagonalRandom{}, 5, RandomStream(5));
  const CMatrix v = proc.diagonal_state()->frame.matrix();
  const CVector d0 = (v.adjoint() * o.matrix() * v).diagonal();
  const ObservableTrajectory t = run_trajectory(o, proc, 50);
  for (const auto& on : t.observables) {
    EXPECT_LT(((v.adjoint() * on.matrix() * v).diagonal() - d0).cwiseAbs().maxCoeff(), 1e-10);
  }
}

TEST(Trajectory, FixedHaarMatchesMatrixPower) {
  const Observable o = jx(4);
  UnitaryProcess proc(policy::FixedHaarRepeated{}, 4, RandomStream(6));
  const ObservableTrajectory t = run_trajectory(o, proc, 5);
  const CMatrix u = proc.fixed_unitary()->matrix();
  CMatrix un = CMatrix::Identity(4, 4);
  for (int i = 0; i < 5; ++i) un = un * u;
  EXPECT_LT((t.observables[4].matrix() - un.adjoint() * o.matrix() * un).cwiseAbs().maxCoeff(), 1e-10);
}

// -- design matrix -----------------------------------------------------------

TEST(Design, BasisElementUnderIdentityGivesUnitRows) {
  const OperatorBasis b = make_hermitian_basis(3);
  const Observable e1 = Observable::from_matrix(b[0]);
  ObservableTrajectory t{e1, {}, "identity"};
  for (int n = 0; n < 4; ++n) t.observables.push_back(evolve_observable(e1, Unitary::identity(3)));
  const DesignMatrix m = design_matrix(t, b);
  for (Index n = 0; n < 4; ++n) {
    EXPECT_NEAR(m.values()(n, 0), 1.0, 1e-15);
    EXPECT_NEAR(m.values().row(n).tail(7).cwiseAbs().maxCoeff(), 0.0, 1e-15);
  }
}

TEST(Design, RowNormsEqualObservableNorm) {
  const DesignMatrix m = run_design(policy::HaarPerStep{}, 21, 30, 7);
  for (Index n = 0; n < m.rows(); ++n) EXPECT_NEAR(m.values().row(n).squaredNorm(), 770.0, 1e-8);
}

TEST(Design, HaarRankIsFull) {
  EXPECT_EQ(rank_of(run_design(policy::HaarPerStep{}, 7, 294, 8)), 48u);
}

TEST(Design, DiagonalRankIsSpanBound) {
  for (Index d : {4, 5, 7}) {
    const DesignMatrix m = run_design(policy::DiagonalRandom{}, d, static_cast<std::size_t>(2 * d * d), 9);
    EXPECT_EQ(rank_of(m), static_cast<std::size_t>(d * d - d + 1)) << "d=" << d;
  }
}

// -- records and covariance --------------------------------------------------

TEST(Record, NoiselessRecordIsExact) {
  RandomStream rng(10);
  const DesignMatrix m = run_design(policy::HaarPerStep{}, 3, 20, 10);
  const BlochVector r = bloch_decompose(sample_pure_state(3, rng), make_hermitian_basis(3));
  const MeasurementRecord rec = synth_record(m, r, 0.0, rng);
  EXPECT_LT((rec.values - m.values() * r.components).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_THROW(synth_record(m, r, -1.0, rng), InvalidParameter);
}

TEST(Record, MaximallyMixedRecordIsPureNoise) {
  RandomStream rng(11);
  const DesignMatrix m = run_design(policy::HaarPerStep{}, 2, 10000, 11);
  const BlochVector zero{2, RVector::Zero(3)};
  const MeasurementRecord rec = synth_record(m, zero, 2.0, rng);
  const double mean = rec.values.mean();
  const double var = (rec.values.array() - mean).square().sum() / (rec.values.size() - 1);
  EXPECT_NEAR(mean, 0.0, 4.0 * 2.0 / 100.0);
  EXPECT_NEAR(var, 4.0, 4.0 * 4.0 * std::sqrt(2.0 / 10000.0));
}

TEST(Record, SeededRecordsAreBitReproducible) {
  const DesignMatrix m = run_design(policy::HaarPerStep{}, 3, 50, 12);
  const BlochVector r{3, RVector::Constant(8, 0.1)};
  RandomStream a(99), b(99);
  const auto ra = synth_record(m, r, 1.0, a);
  const auto rb = synth_record(m, r, 1.0, b);
  EXPECT_TRUE((ra.values.array() == rb.values.array()).all());
}

TEST(InverseCovariance, EmptyDesignIsZero) {
  const InverseCovariance c = inverse_covariance(DesignMatrix(RMatrix(0, 8)), 1.0);
  EXPECT_EQ(c.dim(), 8);
  EXPECT_EQ(c.matrix().cwiseAbs().maxCoeff(), 0.0);
}

TEST(InverseCovariance, TraceIdentity) {
  const DesignMatrix m = run_design(policy::HaarPerStep{}, 21, 2646, 13);
  EXPECT_NEAR(inverse_covariance(m, 1.0).trace(), 2646.0 * 770.0, 1e-6 * 2646.0 * 770.0);
  EXPECT_NEAR(inverse_covariance(m, 2.0).trace(), 2646.0 * 770.0 / 4.0, 1e-6 * 2646.0 * 770.0);
}

TEST(InverseCovariance, RejectsAsymmetricInput) {
  RMatrix a(2, 2);
  a << 1, 0.5, 0, 1;
  EXPECT_THROW(InverseCovariance::from_matrix(a), InvalidParameter);
}

TEST(NormalEquations, StreamingMatchesDenseDesign) {
  const Observable o = jx(4);
  UnitaryProcess a(policy::DiagonalRandom{}, 4, RandomStream(14));
  UnitaryProcess b(policy::DiagonalRandom{}, 4, RandomStream(14));
  const OperatorBasis basis = make_hermitian_basis(4);
  const NormalEquations ne = stream_normal_equations(o, a, 1300, basis);
  const DesignMatrix m = design_matrix(run_trajectory(o, b, 1300), basis);
  EXPECT_LT((ne.gram() - m.values().transpose() * m.values()).cwiseAbs().maxCoeff(), 1e-8);
  EXPECT_EQ(ne.rows(), 1300u);
}

// -- estimation --------------------------------------------------------------

TEST(MlEstimate, NoiselessCompleteRecordIsExact) {
  RandomStream rng(15);
  const OperatorBasis b = make_hermitian_basis(4);
  const DesignMatrix m = run_design(policy::HaarPerStep{}, 4, 96, 15);
  const BlochVector r = bloch_decompose(sample_mixed_state(4, rng), b);
  const MeasurementRecord rec = synth_record(m, r, 0.0, rng);
  EXPECT_LT((ml_estimate(m, rec, 0.0, 0.0).components - r.components).cwiseAbs().maxCoeff(), 1e-8);
  EXPECT_LT((ml_estimate(m, rec, 0.0, 16.0).components - r.components).cwiseAbs().maxCoeff(), 1e-8);
}

TEST(MlEstimate, ZeroRecordGivesZero) {
  const DesignMatrix m = run_design(policy::HaarPerStep{}, 3, 40, 16);
  const MeasurementRecord rec{RVector::Zero(40), 1.0, 0};
  EXPECT_EQ(ml_estimate(m, rec, 1.0, 9.0).components.cwiseAbs().maxCoeff(), 0.0);
}

TEST(MlEstimate, MatchesDirectNormalEquationSolve) {
  RandomStream rng(17);
  const OperatorBasis b = make_hermitian_basis(4);
  const DesignMatrix m = run_design(policy::DiagonalRandom{}, 4, 100, 17);
  const BlochVector r = bloch_decompose(sample_pure_state(4, rng), b);
  const double sigma = 0.1, eps = 16.0;
  const MeasurementRecord rec = synth_record(m, r, sigma, rng);
  const RMatrix& o = m.values();
  const RMatrix lhs = o.transpose() * o / (sigma * sigma) + eps * RMatrix::Identity(15, 15);
  const RVector oracle = lhs.fullPivLu().solve(o.transpose() * rec.values / (sigma * sigma));
  const RVector est = ml_estimate(m, rec, sigma, eps).components;
  EXPECT_LT((est - oracle).cwiseAbs().maxCoeff(), 1e-8);

  NormalEquations ne(15);
  ne.add_rows(o, rec.values);
  EXPECT_LT((ml_estimate(ne, sigma, eps, 4).components - oracle).cwiseAbs().maxCoeff(), 1e-8);
}

TEST(MlEstimate, UnregularizedFullRankIsExactMinimizer) {
  RandomStream rng(18);
  const DesignMatrix m = run_design(policy::HaarPerStep{}, 3, 60, 18);
  const MeasurementRecord rec = synth_record(m, {3, RVector::Constant(8, 0.05)}, 1.0, rng);
  const RVector r = ml_estimate(m, rec, 1.0, 0.0).components;
  const RVector g = m.values().transpose() * rec.values;
  EXPECT_LE((g - m.values().transpose() * m.values() * r).norm(), 1e-8 * g.norm());
}

TEST(MlEstimate, RankDeficientWithoutRegularizerThrows) {
  const DesignMatrix m = run_design(policy::DiagonalRandom{}, 4, 100, 19);
  const MeasurementRecord rec{RVector::Ones(100), 1.0, 0};
  try {
    ml_estimate(m, rec, 1.0, 0.0);
    FAIL() << "expected RankDeficient";
  } catch (const RankDeficient& e) {
    EXPECT_EQ(e.deficiency(), 15u - 13u);
  }
  const DesignMatrix short_run = run_design(policy::HaarPerStep{}, 4, 5, 19);
  EXPECT_THROW(ml_estimate(short_run, {RVector::Ones(5), 1.0, 0}, 1.0, 0.0), RankDeficient);
}

// -- projection --------------------------------------------------------------

// Plain projected gradient in matrix form with its own simplex projection.
double oracle_projection_objective(const RVector& r_ml, const RMatrix& w, const OperatorBasis& basis,
                                   RandomStream& rng) {
  const Index d = basis.dim();
  auto compose = [&](const RVector& r) {
    CMatrix m = CMatrix::Identity(d, d) / static_cast<double>(d);
    for (Index a = 0; a < basis.size(); ++a) m += r(a) * basis[a];
    return m;
  };
  auto coeffs = [&](const CMatrix& m) {
    RVector r(basis.size());
    for (Index a = 0; a < basis.size(); ++a) r(a) = (m * basis[a]).trace().real();
    return r;
  };
  auto to_states = [&](const CMatrix& h) {
    Eigen::SelfAdjointEigenSolver<CMatrix> es((h + h.adjoint()) / 2.0);
    std::vector<double> v(es.eigenvalues().data(), es.eigenvalues().data() + d);
    std::vector<double> u = v;
    std::sort(u.rbegin(), u.rend());
    double cum = 0.0, theta = 0.0;
    for (Index k = 0; k < d; ++k) {
      cum += u[static_cast<std::size_t>(k)];
      const double t = (cum - 1.0) / static_cast<double>(k + 1);
      if (u[static_cast<std::size_t>(k)] - t > 0) theta = t;
    }
    RVector p(d);
    for (Index k = 0; k < d; ++k) p(k) = std::max(0.0, v[static_cast<std::size_t>(k)] - theta);
    return CMatrix(es.eigenvectors() * p.cast<Complex>().asDiagonal() * es.eigenvectors().adjoint());
  };
  const double lmax = Eigen::SelfAdjointEigenSolver<RMatrix>(w).eigenvalues().maxCoeff();
  double best = std::numeric_limits<double>::infinity();
  for (int start = 0; start < 4; ++start) {
    const CMatrix g = oracle::random_complex(d, d, rng);
    RVector r = coeffs(to_states(g * g.adjoint() / (g * g.adjoint()).trace()));
    for (int it = 0; it < 60000; ++it) {
      const RVector grad = 2.0 * w * (r - r_ml);
      r = coeffs(to_states(compose(r - grad / (2.0 * lmax))));
    }
    const RVector diff = r_ml - r;
    best = std::min(best, diff.dot(w * diff));
  }
  return best;
}

TEST(Projection, PhysicalInputIsReturnedUnchanged) {
  RandomStream rng(20);
  const OperatorBasis b = make_hermitian_basis(3);
  const DensityMatrix rho = sample_mixed_state(3, rng);
  const BlochVector r = bloch_decompose(rho, b);
  const auto res = project_physical(r, InverseCovariance::from_matrix(RMatrix::Identity(8, 8)), b);
  EXPECT_EQ(res.iterations, 0);
  EXPECT_TRUE(res.converged);
  EXPECT_LT((res.state.matrix() - rho.matrix()).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Projection, QubitIsotropicIsRadial) {
  const OperatorBasis b = make_hermitian_basis(2);
  for (Index axis = 0; axis < 3; ++axis) {
    BlochVector r{2, RVector::Zero(3)};
    r.components(axis) = 0.9;
    const auto res = project_physical(r, InverseCovariance::from_matrix(RMatrix::Identity(3, 3)), b);
    EXPECT_NEAR(res.bloch.components(axis), 1.0 / std::sqrt(2.0), 1e-8);
    EXPECT_NEAR(res.bloch.components.norm(), 1.0 / std::sqrt(2.0), 1e-8);
    EXPECT_NEAR(res.state.purity(), 1.0, 1e-8);
  }
}

TEST(Projection, MatchesMultiStartProjectedGradientOracle) {
  RandomStream rng(21);
  const Index d = 4;
  const OperatorBasis b = make_hermitian_basis(d);
  const DesignMatrix m = run_design(policy::DiagonalRandom{}, d, 96, 21);
  const BlochVector truth = bloch_decompose(sample_pure_state(d, rng), b);
  const MeasurementRecord rec = synth_record(m, truth, 1.0, rng);
  const BlochVector r_ml = ml_estimate(m, rec, 1.0, 16.0);
  const InverseCovariance w = inverse_covariance(m, 1.0);
  const auto res = project_physical(r_ml, w, b);
  ASSERT_GT(res.iterations, 0) << "estimate was already physical; pick another seed";
  const double oracle = oracle_projection_objective(r_ml.components, w.matrix(), b, rng);
  EXPECT_NEAR(res.objective, oracle, 1e-6 * std::max(1.0, oracle));
}

TEST(Projection, OutputIsPhysicalAndBeatsClippedProjection) {
  RandomStream rng(22);
  for (int trial = 0; trial < 10; ++trial) {
    const Index d = 3 + trial % 3;
    const OperatorBasis b = make_hermitian_basis(d);
    const DesignMatrix m = run_design(policy::HaarPerStep{}, d, static_cast<std::size_t>(3 * d * d), 100 + trial);
    const MeasurementRecord rec = synth_record(m, bloch_decompose(sample_pure_state(d, rng), b), 1.0, rng);
    const BlochVector r_ml = ml_estimate(m, rec, 1.0, static_cast<double>(d * d));
    const InverseCovariance w = inverse_covariance(m, 1.0);
    const auto res = project_physical(r_ml, w, b);
    EXPECT_NO_THROW(DensityMatrix::from_matrix(res.state.matrix()));
    const BlochVector clipped = bloch_decompose(DensityMatrix::from_matrix(nearest_density_matrix(bloch_compose(r_ml, b))), b);
    const RVector diff = r_ml.components - clipped.components;
    EXPECT_LE(res.objective, diff.dot(w.matrix() * diff) * (1.0 + 1e-9));
  }
}

TEST(Simplex, ProjectionProperties) {
  RVector v(4);
  v << 0.5, 0.5, 0.5, -1.0;
  const RVector p = project_to_simplex(v);
  EXPECT_NEAR(p.sum(), 1.0, 1e-15);
  EXPECT_NEAR(p(0), 1.0 / 3.0, 1e-15);
  EXPECT_EQ(p(3), 0.0);
}

// -- end-to-end --------------------------------------------------------------

TEST(Reconstruct, NoiselessHaarRecoversState) {
  for (Index d : {3, 5}) {
    ReconstructionConfig c;
    c.dim = d;
    c.steps = static_cast<std::size_t>(d * d - 1);
    c.sigma = 0.0;
    c.epsilon = static_cast<double>(d * d);
    const auto res = reconstruct(c, RandomStream(23));
    EXPECT_NEAR(res.fidelity.back(), 1.0, 1e-6);
  }
}

TEST(Reconstruct, CheckpointsAndSeriesShapes) {
  EXPECT_EQ(checkpoint_steps(10, 3), (std::vector<std::size_t>{3, 6, 9, 10}));
  EXPECT_EQ(checkpoint_steps(294).size(), 294u);
  EXPECT_EQ(checkpoint_steps(2646).front(), 13u);
  EXPECT_EQ(checkpoint_steps(2646).back(), 2646u);
  ReconstructionConfig c;
  c.dim = 3;
  c.steps = 40;
  c.stride = 10;
  c.epsilon = 9.0;
  c.track_info = true;
  const auto res = reconstruct(c, RandomStream(24));
  EXPECT_EQ(res.fidelity.size(), 4u);
  EXPECT_EQ(res.info.size(), 4u);
  EXPECT_EQ(res.final_spectrum.size(), 8u);
  for (std::size_t i = 1; i < res.info.size(); ++i) EXPECT_GE(res.info.records()[i].rank, res.info.records()[i - 1].rank);
}

TEST(Reconstruct, MeanFidelityGrowsWithSteps) {
  ReconstructionConfig c;
  c.dim = 4;
  c.steps = 400;
  c.checkpoints = {50, 100, 200, 400};
  c.policy = policy::HaarPerStep{};
  c.epsilon = 16.0;
  std::vector<double> mean(4, 0.0);
  for (int t = 0; t < 40; ++t) {
    const auto res = reconstruct(c, RandomStream::derive(25, static_cast<std::uint64_t>(t)));
    for (std::size_t i = 0; i < 4; ++i) mean[i] += res.fidelity[i] / 40.0;
  }
  for (std::size_t i = 1; i < 4; ++i) EXPECT_GT(mean[i], mean[i - 1]);
}

TEST(Reconstruct, RotatedObservableDependsOnStream) {
  RandomStream a(1), b(2);
  const Observable oa = make_initial_observable(InitialObservable::rotated, 5, a);
  const Observable ob = make_initial_observable(InitialObservable::rotated, 5, b);
  EXPECT_GT((oa.matrix() - ob.matrix()).cwiseAbs().maxCoeff(), 1e-3);
  EXPECT_NEAR(oa.squared_norm(), (spin_operators(2.0).jz * spin_operators(2.0).jz).trace().real(), 1e-10);
}

}  // namespace
}  // namespace tomolab
