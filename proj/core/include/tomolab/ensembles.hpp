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

#include <optional>
#include <string>
#include <variant>

#include "tomolab/linalg.hpp"
#include "tomolab/qcore.hpp"
#include "tomolab/random.hpp"

namespace tomolab {

inline constexpr double kUnitaryTolerance = 1e-12;

class Unitary {
 public:
  /// Validates U^dagger U = I to `tolerance`.
  static Unitary from_matrix(CMatrix m, double tolerance = kUnitaryTolerance);
  static Unitary identity(Index d);

  const CMatrix& matrix() const noexcept { return m_; }
  Index dim() const noexcept { return m_.rows(); }

 private:
  friend struct UnitaryAccess;
  explicit Unitary(CMatrix m) : m_(std::move(m)) {}
  CMatrix m_;
};

/// QR of a complex Ginibre matrix with the R-diagonal phase fix, Q <- Q diag(R_ii/|R_ii|).
Unitary sample_haar_unitary(Index d, RandomStream& rng);

/// Running state of the random-diagonal process: U_m = V diag(e^{-i phi_mj}) V^dagger.
struct DiagonalProcessState {
  Unitary frame;
  RVector accumulated_phases;  // Phi_nj = sum_{m<=n} phi_mj
  std::size_t steps = 0;

  explicit DiagonalProcessState(Unitary v)
      : frame(std::move(v)), accumulated_phases(RVector::Zero(frame.dim())) {}
};

/// Draws phi_mj iid uniform on [0, 2pi), advances `state`, returns V diag(e^{-i phi}) V^dagger.
Unitary sample_diagonal_unitary(DiagonalProcessState& state, RandomStream& rng);

struct KickedTopParams {
  double j = 10.0;
  double k0 = 7.0;
  static constexpr double rotation_angle = 1.4;
};

/// exp(-i 1.4 Jx) exp(-i k0/(2j) Jz^2).
Unitary kicked_top(const KickedTopParams& params);

/// R = exp(-i pi Jx).
Unitary parity_operator(double j);

struct HybridMap {
  Unitary unitary;
  /// Set when either input has two eigenphases closer than 1e-10; pairing is
  /// still done by sorted order.
  bool near_degenerate = false;
};

/// V_b diag(sorted eigenvalues of `eigvals_from`) V_b^dagger, where V_b holds the
/// eigenvectors of `eigvecs_from` ordered by its own ascending eigenphases.
HybridMap hybrid_map(const Unitary& eigvals_from, const Unitary& eigvecs_from);

enum class FrameChoice { random, computational };

namespace policy {
struct HaarPerStep {};
struct FixedHaarRepeated {};
struct DiagonalRandom {
  FrameChoice frame = FrameChoice::random;
};
struct KickedTop {
  KickedTopParams params;
};
struct HybridEigenSwap {
  KickedTopParams eigenvalues_from;
  KickedTopParams eigenvectors_from;
};
}  // namespace policy

using ProcessPolicy = std::variant<policy::HaarPerStep, policy::FixedHaarRepeated, policy::DiagonalRandom,
                                   policy::KickedTop, policy::HybridEigenSwap>;

std::string describe(const ProcessPolicy& policy);

/// Hilbert-space dimension a policy forces (kicked-top family), if any.
std::optional<Index> forced_dimension(const ProcessPolicy& policy);

/// Stateful single-owner iterator over the step unitaries of one policy.
class UnitaryProcess {
 public:
  UnitaryProcess(ProcessPolicy policy, Index dim, RandomStream rng);

  Unitary next();

  const ProcessPolicy& policy() const noexcept { return policy_; }
  Index dim() const noexcept { return dim_; }
  std::size_t steps_taken() const noexcept { return steps_; }

  /// Present only for DiagonalRandom.
  const std::optional<DiagonalProcessState>& diagonal_state() const noexcept { return diagonal_; }
  /// Present for policies that repeat one matrix.
  const std::optional<Unitary>& fixed_unitary() const noexcept { return fixed_; }
  bool near_degenerate() const noexcept { return near_degenerate_; }

 private:
  ProcessPolicy policy_;
  Index dim_;
  RandomStream rng_;
  std::size_t steps_ = 0;
  std::optional<DiagonalProcessState> diagonal_;
  std::optional<Unitary> fixed_;
  bool near_degenerate_ = false;
};

inline Unitary next_unitary(UnitaryProcess& process) { return process.next(); }

}  // namespace tomolab
