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

#include "tomolab/rmtref.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "tomolab/error.hpp"
#include "tomolab/quadrature.hpp"

namespace tomolab {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kHalfPi = std::numbers::pi / 2.0;
constexpr int kCdfCells = 2048;
// exp(-u^2 / 2) underflows to zero beyond this, so the PT integrals stop here.
constexpr double kPtCutoff = 40.0;
constexpr double kMassTolerance = 1e-9;
const double kInvSqrt2Pi = 1.0 / std::sqrt(2.0 * kPi);

quadrature::Options tight() {
  quadrature::Options o;
  o.abs_tol = 1e-12;
  return o;
}

/// MP unit-mean variable y = a + (b - a) sin^2(theta).
struct MpMap {
  double a, b, q;

  double y(double theta) const {
    const double s = std::sin(theta);
    return a + (b - a) * s * s;
  }
  /// rho(y) dy/dtheta; smooth on [0, pi/2] including the q = 1 hard edge.
  double weight(double theta) const {
    const double s = std::sin(theta);
    const double c = std::cos(theta);
    if (a == 0.0) return b * c * c / (kPi * q);
    return (b - a) * (b - a) * s * s * c * c / (kPi * q * y(theta));
  }
  double theta(double yy) const {
    const double t = std::clamp((yy - a) / (b - a), 0.0, 1.0);
    return std::asin(std::sqrt(t));
  }
};

MpMap mp_map(const SpectralLaw& law) {
  if (law.kind() != LawKind::marchenko_pastur) throw InvalidParameter("expected a Marchenko-Pastur law");
  return {law.unit_lower(), law.unit_upper(), law.ratio()};
}

double quartile(const std::vector<double>& sorted, double p) {
  const double pos = p * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

std::size_t bin_count(double range, double width, std::size_t n) {
  double bins = width > 0.0 ? std::ceil(range / width) : std::ceil(std::log2(static_cast<double>(n)) + 1.0);
  return static_cast<std::size_t>(std::clamp(bins, 1.0, 10000.0));
}

std::vector<double> padded_normalized(const Spectrum& spec, std::size_t modes) {
  std::vector<double> vals = spec.normalized();
  if (vals.size() < modes) vals.resize(modes, 0.0);
  std::sort(vals.begin(), vals.end());
  return vals;
}

}  // namespace

// ---------------------------------------------------------------------------
// SpectralLaw

double SpectralLaw::unit_density(double y) const {
  if (kind_ == LawKind::porter_thomas) {
    return y > 0.0 ? kInvSqrt2Pi * std::exp(-0.5 * y) / std::sqrt(y) : 0.0;
  }
  if (y <= lower_ || y >= upper_ || y <= 0.0) return 0.0;
  return std::sqrt((upper_ - y) * (y - lower_)) / (2.0 * kPi * ratio_ * y);
}

double SpectralLaw::density(double x) const { return unit_density(x / scale()) / scale(); }

double SpectralLaw::unit_cdf(double y) const {
  if (kind_ == LawKind::porter_thomas) return y > 0.0 ? std::erf(std::sqrt(0.5 * y)) : 0.0;
  if (y <= lower_) return 0.0;
  if (y >= upper_) return 1.0;
  const MpMap map{lower_, upper_, ratio_};
  const double theta = map.theta(y);
  const double h = kHalfPi / kCdfCells;
  const int cell = std::min(static_cast<int>(theta / h), kCdfCells - 1);
  const double base = (*cdf_table_)[static_cast<std::size_t>(cell)];
  const double partial =
      quadrature::integrate([&](double t) { return map.weight(t); }, cell * h, theta, tight()).value;
  return std::clamp(base + partial, 0.0, 1.0);
}

double SpectralLaw::cdf(double x) const { return unit_cdf(x / scale()); }

double SpectralLaw::quantile(double p) const {
  if (!(p >= 0.0 && p <= 1.0)) throw InvalidParameter("quantile level must lie in [0, 1]");
  double lo = lower_;
  double hi = upper_;
  if (kind_ == LawKind::porter_thomas) {
    hi = 1.0;
    while (unit_cdf(hi) < p && hi < 1e4) hi *= 2.0;
  }
  for (int i = 0; i < 200 && hi - lo > 1e-15 * std::max(1.0, hi); ++i) {
    const double mid = 0.5 * (lo + hi);
    (unit_cdf(mid) < p ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi) * scale();
}

std::string SpectralLaw::describe() const {
  std::ostringstream os;
  os.precision(10);
  if (kind_ == LawKind::marchenko_pastur) {
    os << "Marchenko-Pastur(D=" << modes_ << ", N=" << samples_ << ", q=" << ratio_
       << ", support=(1-sqrt(q))^2..(1+sqrt(q))^2 in unit-mean units)";
  } else {
    os << "Porter-Thomas(modes=" << modes_ << ")";
  }
  return os.str();
}

SpectralLaw mp_law(Index D, Index N) {
  if (D < 2) throw InvalidDimension("Marchenko-Pastur law needs D >= 2");
  if (D > N) throw InvalidParameter("Marchenko-Pastur law needs D <= N (aspect ratio <= 1)");
  SpectralLaw law;
  law.kind_ = LawKind::marchenko_pastur;
  law.modes_ = D;
  law.samples_ = N;
  law.ratio_ = static_cast<double>(D) / static_cast<double>(N);
  const double root = std::sqrt(law.ratio_);
  law.lower_ = (1.0 - root) * (1.0 - root);
  law.upper_ = (1.0 + root) * (1.0 + root);

  const MpMap map{law.lower_, law.upper_, law.ratio_};
  auto table = std::make_shared<std::vector<double>>(kCdfCells + 1, 0.0);
  const double h = kHalfPi / kCdfCells;
  for (int i = 0; i < kCdfCells; ++i) {
    const double cell = quadrature::integrate([&](double t) { return map.weight(t); }, i * h, (i + 1) * h, tight()).value;
    (*table)[static_cast<std::size_t>(i) + 1] = (*table)[static_cast<std::size_t>(i)] + cell;
  }
  law.total_mass_ = table->back();
  if (std::abs(law.total_mass_ - 1.0) > kMassTolerance) {
    throw QuadratureError("Marchenko-Pastur density does not integrate to 1", std::abs(law.total_mass_ - 1.0));
  }
  law.cdf_table_ = std::move(table);
  return law;
}

SpectralLaw pt_law(Index d) {
  if (d < 2) throw InvalidDimension("Porter-Thomas law needs d >= 2");
  SpectralLaw law;
  law.kind_ = LawKind::porter_thomas;
  law.modes_ = d * d;
  law.lower_ = 0.0;
  law.upper_ = std::numeric_limits<double>::infinity();
  // y = u^2 removes the y^{-1/2} singularity at the origin.
  law.total_mass_ = quadrature::integrate([](double u) { return 2.0 * kInvSqrt2Pi * std::exp(-0.5 * u * u); }, 0.0,
                                          kPtCutoff, tight())
                        .value;
  if (std::abs(law.total_mass_ - 1.0) > kMassTolerance) {
    throw QuadratureError("Porter-Thomas density does not integrate to 1", std::abs(law.total_mass_ - 1.0));
  }
  return law;
}

// ---------------------------------------------------------------------------
// Functionals

double mp_entropy(const SpectralLaw& law) {
  const MpMap map = mp_map(law);
  const double modes = static_cast<double>(law.modes());
  auto integrand = [&](double t) {
    const double y = map.y(t);
    return y > 0.0 ? y * std::log(y / modes) * map.weight(t) : 0.0;
  };
  return -quadrature::integrate(integrand, 0.0, kHalfPi, tight()).value;
}

double mp_fisher(const SpectralLaw& law, double trace_total, double epsilon) {
  const MpMap map = mp_map(law);
  if (!(trace_total > 0.0)) throw InvalidParameter("trace_total must be > 0");
  if (!(epsilon >= 0.0)) throw InvalidParameter("epsilon must be >= 0");
  if (epsilon == 0.0 && map.a == 0.0) throw DomainError("E[1/lambda] diverges for a square Wishart law without regularization");
  const double modes = static_cast<double>(law.modes());
  const double unit = trace_total / modes;
  auto integrand = [&](double t) { return map.weight(t) / (map.y(t) * unit + epsilon); };
  const double mean_inverse = quadrature::integrate(integrand, 0.0, kHalfPi, tight()).value;
  return 1.0 / (modes * mean_inverse);
}

double pt_entropy(Index d) {
  if (d < 2) throw InvalidDimension("Porter-Thomas entropy needs d >= 2");
  const double modes = static_cast<double>(d * d);
  auto integrand = [&](double u) {
    const double y = u * u;
    return y > 0.0 ? y * std::log(y / modes) * 2.0 * kInvSqrt2Pi * std::exp(-0.5 * y) : 0.0;
  };
  return -quadrature::integrate(integrand, 0.0, kPtCutoff, tight()).value;
}

double pt_entropy_closed_form(Index d) {
  if (d < 2) throw InvalidDimension("Porter-Thomas entropy needs d >= 2");
  constexpr double kOffset = 2.0 - std::numbers::egamma - std::numbers::ln2;
  return std::log(static_cast<double>(d * d)) - kOffset;
}

double pt_fisher(Index d, double trace_total, double epsilon) {
  if (d < 2) throw InvalidDimension("Porter-Thomas Fisher information needs d >= 2");
  if (!(trace_total > 0.0)) throw InvalidParameter("trace_total must be > 0");
  if (!(epsilon > 0.0)) throw DomainError("Porter-Thomas E[1/lambda] diverges; epsilon must be > 0");
  const double modes = static_cast<double>(d * d);
  auto integrand = [&](double u) {
    return 2.0 * kInvSqrt2Pi * std::exp(-0.5 * u * u) / (u * u * trace_total / modes + epsilon);
  };
  const double mean_inverse = quadrature::integrate(integrand, 0.0, kPtCutoff, tight()).value;
  return 1.0 / (modes * mean_inverse);
}

// ---------------------------------------------------------------------------
// Sampling and the sparse superoperator model

Spectrum sample_wishart(Index D, Index N, RandomStream& rng) {
  if (D < 1) throw InvalidDimension("Wishart dimension must be >= 1");
  if (D > N) throw InvalidParameter("Wishart sampling needs D <= N");
  RMatrix x(N, D);
  for (Index c = 0; c < D; ++c) {
    for (Index r = 0; r < N; ++r) x(r, c) = rng.normal();
  }
  RMatrix gram = RMatrix::Zero(D, D);
  gram.selfadjointView<Eigen::Lower>().rankUpdate(x.transpose());
  Eigen::SelfAdjointEigenSolver<RMatrix> es(RMatrix(gram.selfadjointView<Eigen::Lower>()), Eigen::EigenvaluesOnly);
  Spectrum raw = Spectrum::from_values({es.eigenvalues().data(), es.eigenvalues().data() + D});
  return Spectrum::from_values(raw.normalized());
}

SparseInvCov sparse_invcov_approx(const Observable& o0, const Unitary& frame, std::size_t steps) {
  if (o0.dim() != frame.dim()) throw DimensionMismatch("observable and frame differ in dimension");
  const Index d = o0.dim();
  const CMatrix o = frame.matrix().adjoint() * o0.matrix() * frame.matrix();
  const double n = static_cast<double>(steps);
  std::vector<Eigen::Triplet<double>> entries;
  entries.reserve(static_cast<std::size_t>(2 * d * d));
  for (Index j = 0; j < d; ++j) {
    for (Index k = 0; k < d; ++k) {
      const double v = n * std::norm(o(j, k));
      if (v != 0.0) entries.emplace_back(j * d + k, j * d + k, v);
      if (j != k) {
        const double coupling = n * o(j, j).real() * o(k, k).real();
        if (coupling != 0.0) entries.emplace_back(j * d + j, k * d + k, coupling);
      }
    }
  }
  SparseInvCov out;
  out.dim = d;
  out.matrix.resize(d * d, d * d);
  out.matrix.setFromTriplets(entries.begin(), entries.end());
  return out;
}

// ---------------------------------------------------------------------------
// Distances

double freedman_diaconis_width(std::vector<double> values) {
  if (values.size() < 2) return 0.0;
  std::sort(values.begin(), values.end());
  const double iqr = quartile(values, 0.75) - quartile(values, 0.25);
  return 2.0 * iqr * std::pow(static_cast<double>(values.size()), -1.0 / 3.0);
}

double ks_critical_value(std::size_t n, double alpha) {
  if (n == 0) throw InvalidParameter("KS critical value needs n > 0");
  if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidParameter("alpha must lie in (0, 1)");
  const double c = std::sqrt(-0.5 * std::log(0.5 * alpha));
  const double rn = std::sqrt(static_cast<double>(n));
  return c / (rn + 0.12 + 0.11 / rn);
}

LawDistance spectrum_vs_law(const Spectrum& spec, const SpectralLaw& law) {
  if (spec.size() == 0) throw InvalidParameter("empty spectrum");
  const std::vector<double> vals = padded_normalized(spec, static_cast<std::size_t>(law.modes()));
  const std::size_t n = vals.size();
  const double nn = static_cast<double>(n);

  LawDistance out;
  out.samples = n;
  for (std::size_t i = 0; i < n; ++i) {
    const double f = law.cdf(vals[i]);
    out.ks = std::max({out.ks, f - static_cast<double>(i) / nn, static_cast<double>(i + 1) / nn - f});
  }

  const double lo = law.lower();
  const double hi = law.kind() == LawKind::porter_thomas ? vals.back() : law.upper();
  const std::size_t bins = hi > lo ? bin_count(hi - lo, freedman_diaconis_width(vals), n) : 1;
  out.bins = bins;
  std::vector<double> counts(bins, 0.0);
  double outside = 0.0;
  const double width = (hi - lo) / static_cast<double>(bins);
  for (double v : vals) {
    if (v < lo || v > hi || !(hi > lo)) {
      outside += 1.0;
      continue;
    }
    const auto b = std::min(static_cast<std::size_t>((v - lo) / width), bins - 1);
    counts[b] += 1.0;
  }
  double prev = law.cdf(lo);
  const double inside_mass = law.cdf(hi) - prev;
  for (std::size_t b = 0; b < bins; ++b) {
    const double next = law.cdf(lo + static_cast<double>(b + 1) * width);
    out.l1 += std::abs(counts[b] / nn - (next - prev));
    prev = next;
  }
  out.l1 += outside / nn + std::max(0.0, 1.0 - inside_mass);
  return out;
}

LawDistance spectrum_vs_spectrum(const Spectrum& a, const Spectrum& b) {
  if (a.size() == 0 || b.size() == 0) throw InvalidParameter("empty spectrum");
  std::vector<double> va = a.normalized();
  std::vector<double> vb = b.normalized();
  std::sort(va.begin(), va.end());
  std::sort(vb.begin(), vb.end());
  const double na = static_cast<double>(va.size());
  const double nb = static_cast<double>(vb.size());

  LawDistance out;
  out.samples = va.size() + vb.size();
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < va.size() || j < vb.size()) {
    const double x = (j >= vb.size() || (i < va.size() && va[i] <= vb[j])) ? va[i] : vb[j];
    while (i < va.size() && va[i] <= x) ++i;
    while (j < vb.size() && vb[j] <= x) ++j;
    out.ks = std::max(out.ks, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }

  std::vector<double> pooled(va);
  pooled.insert(pooled.end(), vb.begin(), vb.end());
  const double lo = std::min(va.front(), vb.front());
  const double hi = std::max(va.back(), vb.back());
  const std::size_t bins = hi > lo ? bin_count(hi - lo, freedman_diaconis_width(pooled), pooled.size()) : 1;
  out.bins = bins;
  std::vector<double> ha(bins, 0.0);
  std::vector<double> hb(bins, 0.0);
  auto bin_of = [&](double v) {
    if (!(hi > lo)) return std::size_t{0};
    return std::min(static_cast<std::size_t>((v - lo) / (hi - lo) * static_cast<double>(bins)), bins - 1);
  };
  for (double v : va) ha[bin_of(v)] += 1.0 / na;
  for (double v : vb) hb[bin_of(v)] += 1.0 / nb;
  for (std::size_t k = 0; k < bins; ++k) out.l1 += std::abs(ha[k] - hb[k]);
  return out;
}

}  // namespace tomolab
