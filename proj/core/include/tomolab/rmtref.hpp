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

#include <cstddef>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/SparseCore>

#include "tomolab/ensembles.hpp"
#include "tomolab/infometrics.hpp"
#include "tomolab/qcore.hpp"
#include "tomolab/random.hpp"

namespace tomolab {

enum class LawKind { marchenko_pastur, porter_thomas };

/// Reference eigenvalue density in normalized-eigenvalue units (eigenvalues divided
/// by their total). Internally each law is a unit-mean density in y, and the law
/// variable is x = scale * y with scale = 1 / modes.
class SpectralLaw {
 public:
  LawKind kind() const noexcept { return kind_; }
  /// Number of eigenvalues the law describes: D for MP, d^2 for PT.
  Index modes() const noexcept { return modes_; }
  /// N for MP, 0 for PT.
  Index samples() const noexcept { return samples_; }
  /// D / N for MP.
  double ratio() const noexcept { return ratio_; }
  double scale() const noexcept { return 1.0 / static_cast<double>(modes_); }

  /// Support in law units; PT upper bound is +infinity.
  double lower() const noexcept { return lower_ * scale(); }
  double upper() const noexcept { return upper_ * scale(); }
  /// Support of the unit-mean variable.
  double unit_lower() const noexcept { return lower_; }
  double unit_upper() const noexcept { return upper_; }

  double density(double x) const;
  double cdf(double x) const;
  double quantile(double p) const;
  double unit_density(double y) const;

  /// Quadrature value of the integral of the density over its support.
  double total_mass() const noexcept { return total_mass_; }
  std::string describe() const;

 private:
  friend SpectralLaw mp_law(Index D, Index N);
  friend SpectralLaw pt_law(Index d);
  double unit_cdf(double y) const;

  LawKind kind_ = LawKind::marchenko_pastur;
  Index modes_ = 1;
  Index samples_ = 0;
  double ratio_ = 0.0;
  double lower_ = 0.0;
  double upper_ = 0.0;
  double total_mass_ = 0.0;
  // MP cumulative mass at equally spaced angles theta in [0, pi/2].
  std::shared_ptr<const std::vector<double>> cdf_table_;
};

/// Marchenko-Pastur law of a D x D Wishart matrix from N samples, unit-mean support
/// [(1 - sqrt(D/N))^2, (1 + sqrt(D/N))^2]. Requires 2 <= D <= N.
SpectralLaw mp_law(Index D, Index N);

/// Porter-Thomas law (2 pi y)^{-1/2} e^{-y/2} over d^2 modes.
SpectralLaw pt_law(Index d);

/// -D * integral of x ln x rho(x) over normalized eigenvalues x.
double mp_entropy(const SpectralLaw& law);

/// 1 / (D E[1 / (lambda + epsilon)]) with lambda scaled so that D E[lambda] = trace_total.
double mp_fisher(const SpectralLaw& law, double trace_total, double epsilon);

/// -d^2 * integral of (y/d^2) ln(y/d^2) rho_PT(y) dy, by quadrature.
double pt_entropy(Index d);

/// ln(d^2) - (2 - gamma - ln 2).
double pt_entropy_closed_form(Index d);

/// 1 / [d^2 * integral of rho_PT(y) / (y trace_total / d^2 + epsilon) dy].
/// With epsilon = d^2 this is the rescaled Porter-Thomas Fisher information.
double pt_fisher(Index d, double trace_total, double epsilon);

/// Spectrum of X^T X for an N x D iid standard normal X, normalized to unit sum.
Spectrum sample_wishart(Index D, Index N, RandomStream& rng);

/// N-scaling part of C^{-1} for the random-diagonal process in superoperator indexing
/// (j, k) -> j * d + k, with frame matrix elements o_jk = <j|O_0|k>:
///   N |o_jk|^2 on the diagonal, N o_jj o_kk between (j,j) and (k,k) for j != k.
struct SparseInvCov {
  Index dim = 0;
  Eigen::SparseMatrix<double> matrix;

  std::size_t structural_nonzeros() const { return static_cast<std::size_t>(matrix.nonZeros()); }
  RMatrix dense() const { return RMatrix(matrix); }
};

SparseInvCov sparse_invcov_approx(const Observable& o0, const Unitary& frame, std::size_t steps);

struct LawDistance {
  double l1 = 0.0;
  double ks = 0.0;
  std::size_t bins = 0;
  std::size_t samples = 0;
};

/// Normalized spectrum against a law: Freedman-Diaconis histogram over the law's
/// support (PT: [0, max sample]) compared bin-wise with the law's bin masses, plus
/// any mass outside the histogram range; KS between empirical and law CDFs. Spectra
/// with fewer values than law.modes() are padded with exact zeros.
LawDistance spectrum_vs_law(const Spectrum& spec, const SpectralLaw& law);

/// Two-sample version over normalized spectra on shared Freedman-Diaconis bins.
LawDistance spectrum_vs_spectrum(const Spectrum& a, const Spectrum& b);

/// Asymptotic one-sample KS critical value at significance alpha (Stephens' correction).
double ks_critical_value(std::size_t n, double alpha);

/// Freedman-Diaconis bin width 2 IQR n^{-1/3} of a sample (type-7 quartiles).
double freedman_diaconis_width(std::vector<double> values);

}  // namespace tomolab
