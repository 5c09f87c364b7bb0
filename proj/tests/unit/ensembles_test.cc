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

#include <algorithm>
#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "tomolab/ensembles.hpp"
#include "tomolab/error.hpp"

namespace tomolab {
namespace {

std::vector<double> sorted_phases(const CMatrix& u) {
  Eigen::ComplexEigenSolver<CMatrix> es(u);
  std::vector<double> p;
  for (Index i = 0; i < u.rows(); ++i) p.push_back(std::arg(es.eigenvalues()(i)));
  std::sort(p.begin(), p.end());
  return p;
}

TEST(Haar, UnitaryOverManyDraws) {
  RandomStream rng(1);
  for (int i = 0; i < 1000; ++i) {
    const Unitary u = sample_haar_unitary(1 + i % 9, rng);
    EXPECT_LT(linalg::unitarity_error(u.matrix()), 1e-12);
  }
}

TEST(Haar, OneDimensionalIsUniformPhase) {
  RandomStream rng(2);
  std::vector<double> phases;
  for (int i = 0; i < 5000; ++i) {
    const Complex z = sample_haar_unitary(1, rng).matrix()(0, 0);
    EXPECT_NEAR(std::abs(z), 1.0, 1e-14);
    phases.push_back(std::arg(z));
  }
  const double ks = oracle::ks_statistic(phases, [](double t) { return (t + std::numbers::pi) / (2 * std::numbers::pi); });
  EXPECT_LT(ks, oracle::ks_critical_1pct(phases.size()));
}

TEST(Haar, ColumnEntriesFollowExponentialLaw) {
  RandomStream rng(3);
  const Index d = 16;
  std::vector<double> x;
  for (int i = 0; i < 10000; ++i) {
    x.push_back(static_cast<double>(d) * std::norm(sample_haar_unitary(d, rng).matrix()(i % d, 0)));
  }
  // Exact law of d|u|^2 is Beta(1, d-1) scaled by d; CDF 1 - (1 - x/d)^(d-1).
  const double ks = oracle::ks_statistic(x, [d](double v) { return 1.0 - std::pow(1.0 - v / static_cast<double>(d), d - 1); });
  EXPECT_LT(ks, oracle::ks_critical_1pct(x.size()));
}

TEST(Haar, LeftInvariantMoments) {
  RandomStream rng(4);
  const Index d = 4;
  const CMatrix w = oracle::generic_unitary(d, rng);
  const int draws = 10000;
  double m2 = 0, m4 = 0, w2 = 0, w4 = 0;
  for (int i = 0; i < draws; ++i) {
    const CMatrix u = sample_haar_unitary(d, rng).matrix();
    const double a = std::norm(u(1, 2));
    const double b = std::norm((w * u)(1, 2));
    m2 += a, m4 += a * a, w2 += b, w4 += b * b;
  }
  // E|u|^2 = 1/d, E|u|^4 = 2/(d(d+1)); Monte Carlo error well under 0.01 here.
  EXPECT_NEAR(m2 / draws, 0.25, 0.01);
  EXPECT_NEAR(w2 / draws, 0.25, 0.01);
  EXPECT_NEAR(m4 / draws, 0.1, 0.01);
  EXPECT_NEAR(w4 / draws, 0.1, 0.01);
}

TEST(Diagonal, IdentityFrameGivesDiagonalCommutingSteps) {
  RandomStream rng(5);
  DiagonalProcessState state(Unitary::identity(5));
  const Unitary a = sample_diagonal_unitary(state, rng);
  const Unitary b = sample_diagonal_unitary(state, rng);
  CMatrix off = a.matrix();
  off.diagonal().setZero();
  EXPECT_EQ(off.cwiseAbs().maxCoeff(), 0.0);
  EXPECT_LT((a.matrix() * b.matrix() - b.matrix() * a.matrix()).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Diagonal, ProductEqualsAccumulatedPhases) {
  RandomStream rng(6);
  DiagonalProcessState state(sample_haar_unitary(6, rng));
  CMatrix product = CMatrix::Identity(6, 6);
  for (int n = 0; n < 40; ++n) {
    const Unitary u = sample_diagonal_unitary(state, rng);
    EXPECT_LT(linalg::unitarity_error(u.matrix()), 1e-12);
    product = u.matrix() * product;
  }
  EXPECT_EQ(state.steps, 40u);
  CVector phases(6);
  for (Index j = 0; j < 6; ++j) phases(j) = std::polar(1.0, -state.accumulated_phases(j));
  const CMatrix& v = state.frame.matrix();
  EXPECT_LT((product - v * phases.asDiagonal() * v.adjoint()).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(KickedTop, UnitaryAndParitySymmetric) {
  for (double k0 : {0.5, 3.0, 7.0}) {
    const Unitary u = kicked_top({10.0, k0});
    const Unitary r = parity_operator(10.0);
    EXPECT_LT(linalg::unitarity_error(u.matrix()), 1e-12);
    EXPECT_LT((u.matrix() * r.matrix() - r.matrix() * u.matrix()).cwiseAbs().maxCoeff(), 1e-10);
  }
}

TEST(Parity, SquaresAndFlipsJz) {
  const Unitary r = parity_operator(10.0);
  EXPECT_LT((r.matrix() * r.matrix() - CMatrix::Identity(21, 21)).cwiseAbs().maxCoeff(), 1e-10);
  const Unitary h = parity_operator(1.5);
  EXPECT_LT((h.matrix() * h.matrix() + CMatrix::Identity(4, 4)).cwiseAbs().maxCoeff(), 1e-10);
  const SpinOperators s = spin_operators(10.0);
  EXPECT_LT((r.matrix() * s.jz * r.matrix().adjoint() + s.jz).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(KickedTop, ChaoticLevelRepulsionWithinParityBlocks) {
  const CMatrix u = kicked_top({10.0, 7.0}).matrix();
  const CMatrix r = parity_operator(10.0).matrix();
  Eigen::ComplexEigenSolver<CMatrix> es(u);
  std::vector<double> even, odd;
  for (Index i = 0; i < u.rows(); ++i) {
    const CVector v = es.eigenvectors().col(i);
    const double parity = v.dot(r * v).real();
    (parity > 0 ? even : odd).push_back(std::arg(es.eigenvalues()(i)));
  }
  ASSERT_EQ(even.size() + odd.size(), 21u);
  std::size_t small = 0, total = 0;
  for (auto* block : {&even, &odd}) {
    std::sort(block->begin(), block->end());
    const double mean = 2.0 * std::numbers::pi / static_cast<double>(block->size());
    for (std::size_t i = 0; i < block->size(); ++i) {
      const double next = i + 1 < block->size() ? (*block)[i + 1] : block->front() + 2.0 * std::numbers::pi;
      small += (next - (*block)[i]) < 0.1 * mean;
      ++total;
    }
  }
  const double poisson = 1.0 - std::exp(-0.1);
  EXPECT_LT(static_cast<double>(small) / static_cast<double>(total), poisson);
}

TEST(Hybrid, SelfPairingReturnsInput) {
  RandomStream rng(7);
  const Unitary u = sample_haar_unitary(6, rng);
  const HybridMap h = hybrid_map(u, u);
  EXPECT_FALSE(h.near_degenerate);
  EXPECT_LT((h.unitary.matrix() - u.matrix()).cwiseAbs().maxCoeff(), 1e-8);
}

TEST(Hybrid, TakesEigenvaluesFromOneAndEigenvectorsFromOther) {
  RandomStream rng(8);
  const Unitary a = sample_haar_unitary(7, rng);
  const Unitary b = sample_haar_unitary(7, rng);
  const HybridMap h = hybrid_map(a, b);
  EXPECT_LT(linalg::unitarity_error(h.unitary.matrix()), 1e-10);
  const auto pa = sorted_phases(a.matrix());
  const auto ph = sorted_phases(h.unitary.matrix());
  for (std::size_t i = 0; i < pa.size(); ++i) EXPECT_NEAR(pa[i], ph[i], 1e-10);
  // Every eigenvector of b is an eigenvector of the hybrid.
  Eigen::ComplexEigenSolver<CMatrix> eb(b.matrix());
  for (Index i = 0; i < 7; ++i) {
    const CVector v = eb.eigenvectors().col(i).normalized();
    const CVector w = h.unitary.matrix() * v;
    const Complex lambda = v.dot(w);
    EXPECT_NEAR(std::abs(lambda), 1.0, 1e-9);
    EXPECT_LT((w - lambda * v).norm(), 1e-9);
  }
}

TEST(Hybrid, FlagsDegenerateInput) {
  const HybridMap h = hybrid_map(Unitary::identity(3), kicked_top({1.0, 7.0}));
  EXPECT_TRUE(h.near_degenerate);
}

TEST(Process, EveryPolicyEmitsUnitaries) {
  const std::vector<ProcessPolicy> policies{policy::HaarPerStep{}, policy::FixedHaarRepeated{},
                                            policy::DiagonalRandom{}, policy::KickedTop{{3.0, 7.0}},
                                            policy::HybridEigenSwap{{3.0, 7.0}, {3.0, 0.5}}};
  for (const auto& p : policies) {
    UnitaryProcess proc(p, 7, RandomStream(9));
    for (int n = 0; n < 1000; ++n) ASSERT_LT(linalg::unitarity_error(next_unitary(proc).matrix()), 1e-12) << describe(p);
    EXPECT_EQ(proc.steps_taken(), 1000u);
  }
}

TEST(Process, RepeatedPoliciesAreCachedBitwise) {
  for (const ProcessPolicy& p : {ProcessPolicy{policy::FixedHaarRepeated{}}, ProcessPolicy{policy::KickedTop{{3.0, 7.0}}}}) {
    UnitaryProcess proc(p, 7, RandomStream(10));
    const CMatrix a = proc.next().matrix();
    const CMatrix b = proc.next().matrix();
    EXPECT_TRUE((a.array() == b.array()).all());
  }
}

TEST(Process, KickedTopForcesDimension) {
  EXPECT_THROW(UnitaryProcess(policy::KickedTop{{10.0, 7.0}}, 7, RandomStream(1)), DimensionMismatch);
}

TEST(Process, DiagonalStepsShareFrameEigenvectors) {
  UnitaryProcess proc(policy::DiagonalRandom{}, 5, RandomStream(11));
  const CMatrix& v = proc.diagonal_state()->frame.matrix();
  for (int n = 0; n < 20; ++n) {
    const CMatrix d = v.adjoint() * proc.next().matrix() * v;
    CMatrix off = d;
    off.diagonal().setZero();
    EXPECT_LT(off.cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(Process, HaarStepsAreUncorrelated) {
  UnitaryProcess proc(policy::HaarPerStep{}, 3, RandomStream(12));
  std::vector<double> x;
  for (int n = 0; n < 1001; ++n) x.push_back(proc.next().matrix()(0, 0).real());
  double mx = 0, my = 0;
  for (int n = 0; n < 1000; ++n) mx += x[n], my += x[n + 1];
  mx /= 1000, my /= 1000;
  double sxy = 0, sxx = 0, syy = 0;
  for (int n = 0; n < 1000; ++n) {
    sxy += (x[n] - mx) * (x[n + 1] - my);
    sxx += (x[n] - mx) * (x[n] - mx);
    syy += (x[n + 1] - my) * (x[n + 1] - my);
  }
  EXPECT_LT(std::abs(sxy / std::sqrt(sxx * syy)), 4.0 / std::sqrt(1000.0));
}

}  // namespace
}  // namespace tomolab
