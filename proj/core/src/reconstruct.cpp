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

#include "tomolab/reconstruct.hpp"

#include <algorithm>

#include "tomolab/error.hpp"

namespace tomolab {

std::vector<std::size_t> checkpoint_steps(std::size_t steps, std::size_t stride) {
  if (steps < 1) throw InvalidParameter("steps must be >= 1");
  if (stride == 0) stride = std::max<std::size_t>(1, steps / 200);
  std::vector<std::size_t> out;
  for (std::size_t n = stride; n < steps; n += stride) out.push_back(n);
  out.push_back(steps);
  return out;
}

Observable make_initial_observable(InitialObservable kind, Index dim, RandomStream& rng, Index basis_index) {
  if (dim < 2) throw InvalidDimension("observable dimension must be >= 2");
  const double j = 0.5 * static_cast<double>(dim - 1);
  switch (kind) {
    case InitialObservable::jx:
      return Observable::from_matrix(spin_operators(j).jx);
    case InitialObservable::jz:
      return Observable::from_matrix(spin_operators(j).jz);
    case InitialObservable::basis_element: {
      if (basis_index < 0 || basis_index >= dim * dim - 1) throw InvalidParameter("basis_index out of range");
      return Observable::from_matrix(make_hermitian_basis(dim)[basis_index]);
    }
    case InitialObservable::rotated: {
      const Unitary w = sample_haar_unitary(dim, rng);
      const CMatrix o = w.matrix().adjoint() * spin_operators(j).jz * w.matrix();
      return Observable::from_matrix(linalg::hermitize(o));
    }
  }
  throw InvalidParameter("unknown initial observable");
}

ReconstructionResult reconstruct(const ReconstructionConfig& config, const RandomStream& trial) {
  const Index d = config.dim;
  if (d < 2) throw InvalidDimension("dimension must be >= 2");
  if (config.steps < 1) throw InvalidParameter("steps must be >= 1");
  if (!(config.sigma >= 0.0)) throw InvalidParameter("sigma must be >= 0");
  if (!(config.epsilon >= 0.0)) throw InvalidParameter("epsilon must be >= 0");
  if (config.track_info && !(config.sigma > 0.0)) throw InvalidParameter("information metrics need sigma > 0");
  if (auto forced = forced_dimension(config.policy); forced && *forced != d) {
    throw DimensionMismatch("policy forces a different dimension");
  }

  std::vector<std::size_t> checkpoints =
      config.checkpoints.empty() ? checkpoint_steps(config.steps, config.stride) : config.checkpoints;
  if (!std::is_sorted(checkpoints.begin(), checkpoints.end()) ||
      std::adjacent_find(checkpoints.begin(), checkpoints.end()) != checkpoints.end() || checkpoints.front() < 1 ||
      checkpoints.back() > config.steps) {
    throw InvalidParameter("checkpoints must be strictly increasing within [1, steps]");
  }

  RandomStream process_rng = trial.child(0);
  RandomStream state_rng = trial.child(1);
  RandomStream noise_rng = trial.child(2);
  RandomStream observable_rng = trial.child(3);

  const OperatorBasis basis = make_hermitian_basis(d);
  const DensityMatrix truth =
      config.state == StateFamily::haar_pure ? sample_pure_state(d, state_rng) : sample_mixed_state(d, state_rng);
  const BlochVector r_true = bloch_decompose(truth, basis);
  const Observable o0 = make_initial_observable(config.observable, d, observable_rng, config.basis_index);

  UnitaryProcess process(config.policy, d, process_rng);
  const DesignMatrix design = design_matrix(run_trajectory(o0, process, checkpoints.back()), basis);
  const MeasurementRecord record = synth_record(design, r_true, config.sigma, noise_rng);

  ReconstructionResult result{checkpoints, {}, {}, truth, DensityMatrix::maximally_mixed(d), true, {}, 0.0};
  const double inv_var = config.sigma > 0.0 ? 1.0 / (config.sigma * config.sigma) : 1.0;
  NormalEquations normal(basis.size());
  std::size_t done = 0;
  for (const std::size_t n : checkpoints) {
    const auto first = static_cast<Index>(done);
    const auto count = static_cast<Index>(n - done);
    normal.add_rows(design.values().middleRows(first, count), record.values.segment(first, count));
    done = n;

    InverseCovariance weight = InverseCovariance::from_matrix(normal.gram() * inv_var);
    if (config.track_fidelity) {
      const BlochVector r_ml = ml_estimate(normal, config.sigma, config.epsilon, d);
      ProjectionResult projected = project_physical(r_ml, weight, basis, config.projection);
      result.fidelity.push_back(fidelity(truth, projected.state));
      result.projection_converged = result.projection_converged && projected.converged;
      if (n == checkpoints.back()) result.estimate = std::move(projected.state);
    }
    if (config.track_info) {
      Spectrum spec = spectrum(weight);
      result.info.push(info_record(n, spec, config.epsilon, config.rank_tol));
      if (n == checkpoints.back()) {
        result.final_trace = weight.trace();
        result.final_spectrum = std::move(spec);
      }
    }
  }
  return result;
}

}  // namespace tomolab
