// Copyright 2026 The spinps Authors
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

// Stern-Gerlach tomography: outcome probabilities in rotated frames, shot
// noise, pointwise and equiangular-grid reconstruction of phase-space
// functions, and density-matrix recovery by spherical quadrature.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "spinps/error.hpp"
#include "spinps/linalg.hpp"
#include "spinps/parity.hpp"
#include "spinps/phasespace.hpp"
#include "spinps/quadrature.hpp"
#include "spinps/rng.hpp"
#include "spinps/specialfn.hpp"
#include "spinps/spinstates.hpp"

namespace spinps {

// ---------------------------------------------------------------------------
// Measurement model

/// p_m(Omega) = <Jm| R^dag rho R |Jm>, clamped at zero and renormalized.
inline RVector probabilities(const DensityMatrix& rho, const CMatrix& rotation) {
  RVector p = rotated_populations(rho, rotation);
  if (p.minCoeff() < -1e-12) throw IntegrityError("tomography", "negative outcome probability");
  p = p.cwiseMax(0.0);
  const double total = p.sum();
  if (std::abs(total - 1.0) > 1e-10) throw IntegrityError("tomography", "outcome probabilities do not sum to 1");
  return p / total;
}

inline RVector probabilities(const DensityMatrix& rho, const PhasePoint& point) {
  return probabilities(rho, rotation_matrix(rho.J, point));
}

struct SternGerlachRecord {
  PhasePoint point;
  std::vector<std::int64_t> counts;  // N_m, m = J..-J
  std::int64_t repetitions = 0;

  void validate() const {
    std::int64_t total = 0;
    for (const auto c : counts) {
      if (c < 0) throw IntegrityError("tomography", "negative outcome count");
      total += c;
    }
    if (total != repetitions) throw IntegrityError("tomography", "counts do not sum to the repetition number");
  }

  RVector frequencies() const {
    RVector f(static_cast<Eigen::Index>(counts.size()));
    for (std::size_t i = 0; i < counts.size(); ++i)
      f(static_cast<Eigen::Index>(i)) = static_cast<double>(counts[i]) / static_cast<double>(repetitions);
    return f;
  }
};

/// Multinomial draw of n_r outcomes as a chain of conditional binomials.
inline std::vector<std::int64_t> sample_multinomial(const RVector& p, std::int64_t n_r, Stream& rng) {
  if (n_r < 1) throw DomainError("tomography", "repetition number must be at least 1");
  const auto n = static_cast<std::size_t>(p.size());
  std::vector<std::int64_t> counts(n, 0);
  std::int64_t remaining = n_r;
  double mass = 1.0;
  for (std::size_t i = 0; i + 1 < n && remaining > 0; ++i) {
    const double q = mass > 0.0 ? std::clamp(p(static_cast<Eigen::Index>(i)) / mass, 0.0, 1.0) : 0.0;
    std::binomial_distribution<std::int64_t> binomial(remaining, q);
    counts[i] = binomial(rng);
    remaining -= counts[i];
    mass -= p(static_cast<Eigen::Index>(i));
  }
  counts[n - 1] += remaining;
  return counts;
}

inline SternGerlachRecord sample_counts(const DensityMatrix& rho, const PhasePoint& point, std::int64_t n_r,
                                        Stream& rng) {
  return {point, sample_multinomial(probabilities(rho, point), n_r, rng), n_r};
}

/// F^(Omega) = sum_m [M]_mm p_m for exact or estimated probabilities.
inline double pointwise_reconstruct(const RVector& probs, const ParityOperator& parity) {
  if (probs.size() != parity.diag.size()) throw DomainError("tomography", "probability vector has wrong length");
  return parity.diag.dot(probs);
}

inline double pointwise_reconstruct(const SternGerlachRecord& record, const ParityOperator& parity) {
  record.validate();
  return pointwise_reconstruct(record.frequencies(), parity);
}

// ---------------------------------------------------------------------------
// Equiangular sampling

/// theta_k = pi k / N_p, phi_q = 2 pi q / N_p for k, q = 0..N_p-1.
struct GridSpec {
  int n_p = 0;

  double theta(int k) const { return kPi * k / n_p; }
  double phi(int q) const { return 2.0 * kPi * q / n_p; }
  int size() const { return n_p * n_p; }

  std::vector<double> thetas() const {
    std::vector<double> t(n_p);
    for (int k = 0; k < n_p; ++k) t[k] = theta(k);
    return t;
  }
  std::vector<double> phis() const {
    std::vector<double> p(n_p);
    for (int q = 0; q < n_p; ++q) p[q] = phi(q);
    return p;
  }

  void validate_for(HalfInteger J) const {
    if (n_p < 2 || n_p % 2 != 0) throw DomainError("tomography", "N_p must be even and at least 2");
    if (n_p < 2 * J.twice() + 2) throw DomainError("tomography", "N_p must be at least 4J+2");
  }
};

/// Sampled values, row-major in k (theta) then q (phi).
struct GridSamples {
  GridSpec grid;
  std::vector<double> values;
};

/// Equiangular quadrature weights
/// alpha_k = (2 sqrt2 / N_p) sin(theta_k) sum_{l<N_p/2} sin((2l+1) theta_k) / (2l+1).
inline std::vector<double> dh_weights(int n_p) {
  if (n_p < 2 || n_p % 2 != 0) throw DomainError("tomography", "N_p must be even and at least 2");
  std::vector<double> alpha(n_p);
  for (int k = 0; k < n_p; ++k) {
    const double theta = kPi * k / n_p;
    double sum = 0.0;
    for (int l = 0; l < n_p / 2; ++l) sum += std::sin((2 * l + 1) * theta) / (2 * l + 1);
    alpha[k] = 2.0 * std::sqrt(2.0) / n_p * std::sin(theta) * sum;
  }
  return alpha;
}

/// Sample the series of f on the grid.
inline GridSamples sample_grid(const SphericalFunction& f, const GridSpec& grid) {
  const auto t = grid.thetas();
  const auto p = grid.phis();
  return {grid, evaluate_grid(f, t, p)};
}

/// c_jm = (2 pi sqrt2 / N_p) sum_kq alpha_k F(theta_k, phi_q) Y_jm^*(theta_k, phi_q),
/// exact for inputs band-limited to 2J when N_p >= 4J+2.
inline SphericalFunction full_tomography(const GridSamples& samples, HalfInteger J, std::optional<double> s) {
  const GridSpec& grid = samples.grid;
  grid.validate_for(J);
  if (samples.values.size() != static_cast<std::size_t>(grid.size()))
    throw DomainError("tomography", "grid samples are incomplete");
  const int n_p = grid.n_p;
  const int l = J.twice();
  const std::vector<double> alpha = dh_weights(n_p);
  const double prefactor = 2.0 * kPi * std::sqrt(2.0) / n_p;

  SphericalFunction f = SphericalFunction::zeros(J, s);
  std::vector<cplx> modes(2 * l + 1);
  for (int k = 0; k < n_p; ++k) {
    if (alpha[k] == 0.0) continue;
    // G_m = sum_q F(k, q) e^{-i m phi_q}
    for (int m = -l; m <= l; ++m) {
      cplx acc = 0.0;
      for (int q = 0; q < n_p; ++q)
        acc += samples.values[static_cast<std::size_t>(k) * n_p + q] * std::polar(1.0, -m * grid.phi(q));
      modes[m + l] = acc;
    }
    const LegendreTable table(l, grid.theta(k));
    const double w = prefactor * alpha[k];
    for (int j = 0; j <= l; ++j)
      for (int m = -j; m <= j; ++m) {
        const int am = std::abs(m);
        const double lam = (m < 0 && am % 2 == 1) ? -table(j, am) : table(j, am);
        f.coeff(j, m) += w * lam * modes[m + l];
      }
  }
  return f;
}

// ---------------------------------------------------------------------------
// Density-matrix recovery

/// Product rule: Gauss-Legendre in cos(theta) times uniform phi. Weights
/// include the R^2 area factor of the phase-space sphere.
struct DensityQuadrature {
  HalfInteger J;
  std::vector<PhasePoint> nodes;
  std::vector<double> weights;
};

/// Default sizes (2J+1 polar, 4J+1 azimuthal nodes) integrate products of
/// two functions band-limited to 2J exactly.
inline DensityQuadrature density_quadrature(HalfInteger J, int n_theta = 0, int n_phi = 0) {
  require_positive_spin(J, "tomography");
  if (n_theta == 0) n_theta = J.twice() + 1;
  if (n_phi == 0) n_phi = 2 * J.twice() + 1;
  if (n_theta < J.twice() + 1 || n_phi < 2 * J.twice() + 1)
    throw DomainError("tomography", "quadrature too coarse for band limit 2J");
  const QuadratureRule gl = gauss_legendre(n_theta);
  const double r = sphere_radius(J);
  DensityQuadrature quad{J, {}, {}};
  for (int k = 0; k < n_theta; ++k) {
    const double theta = std::acos(std::clamp(gl.nodes[k], -1.0, 1.0));
    for (int q = 0; q < n_phi; ++q) {
      quad.nodes.emplace_back(theta, 2.0 * kPi * q / n_phi);
      quad.weights.push_back(r * r * gl.weights[k] * 2.0 * kPi / n_phi);
    }
  }
  return quad;
}

struct DensityReconstruction {
  DensityMatrix rho;
  double trace_before_normalization = 1.0;
  /// max_m |[M_{-s}]_mm|: the factor by which pointwise errors in F enter rho.
  double amplification = 0.0;
  /// Set when the dual parity operator is larger than the self-dual (Wigner) one.
  bool ill_conditioned = false;
};

namespace detail {

inline DensityReconstruction integrate_density(const DensityQuadrature& quad, std::span<const double> values,
                                               double s, bool strict_trace) {
  const HalfInteger J = quad.J;
  const ParityOperator dual = parity_operator(J, -s);
  const ParityOperator wigner = parity_operator(J, 0.0);
  const int n = J.dim();
  CMatrix acc = CMatrix::Zero(n, n);
  for (std::size_t i = 0; i < quad.nodes.size(); ++i) {
    const CMatrix r = rotation_matrix(J, quad.nodes[i]);
    acc += (quad.weights[i] * values[i]) * (r * dual.diag.cast<cplx>().asDiagonal() * r.adjoint());
  }
  acc = 0.5 * (acc + acc.adjoint()).eval();
  DensityReconstruction out;
  out.trace_before_normalization = acc.trace().real();
  out.amplification = dual.diag.cwiseAbs().maxCoeff();
  out.ill_conditioned = out.amplification > wigner.diag.cwiseAbs().maxCoeff() * (1.0 + 1e-12);
  if (strict_trace) {
    if (std::abs(out.trace_before_normalization - 1.0) > 1e-6)
      throw IntegrityError("tomography", "reconstructed density matrix has trace " +
                                             std::to_string(out.trace_before_normalization));
  } else if (!(out.trace_before_normalization > 0.0)) {
    throw IntegrityError("tomography", "reconstructed density matrix has non-positive trace");
  }
  out.rho = {J, strict_trace ? acc : CMatrix(acc / out.trace_before_normalization)};
  return out;
}

}  // namespace detail

/// rho = integral of F(Omega, s) R M_{-s} R^dag dOmega, by quadrature.
inline DensityReconstruction reconstruct_density(const SphericalFunction& f, const DensityQuadrature& quad) {
  if (!f.s_tag) throw DomainError("tomography", "density reconstruction needs a function with an s tag");
  if (f.twice_J != quad.J.twice()) throw DomainError("tomography", "quadrature built for a different J");
  f.validate();
  std::vector<double> values(quad.nodes.size());
  for (std::size_t i = 0; i < values.size(); ++i) values[i] = evaluate_series(f, quad.nodes[i]);
  return detail::integrate_density(quad, values, *f.s_tag, true);
}

inline DensityReconstruction reconstruct_density(const SphericalFunction& f) {
  return reconstruct_density(f, density_quadrature(f.J()));
}

/// Same as reconstruct_density with F evaluated pointwise from exact outcome
/// probabilities at each quadrature node. Trace must come out as 1.
inline DensityReconstruction reconstruct_density_from_probs(std::span<const RVector> probs,
                                                            const DensityQuadrature& quad, double s) {
  if (probs.size() != quad.nodes.size()) throw DomainError("tomography", "probabilities do not cover the quadrature grid");
  const ParityOperator parity = parity_operator(quad.J, s);
  std::vector<double> values(probs.size());
  for (std::size_t i = 0; i < probs.size(); ++i) values[i] = pointwise_reconstruct(probs[i], parity);
  return detail::integrate_density(quad, values, s, true);
}

/// Shot-noise variant from measured counts. The trace of the raw estimate
/// fluctuates with the counts; it is reported and divided out.
inline DensityReconstruction reconstruct_density_from_records(std::span<const SternGerlachRecord> records,
                                                              const DensityQuadrature& quad, double s) {
  if (records.size() != quad.nodes.size()) throw DomainError("tomography", "records do not cover the quadrature grid");
  const ParityOperator parity = parity_operator(quad.J, s);
  std::vector<double> values(records.size());
  for (std::size_t i = 0; i < records.size(); ++i) values[i] = pointwise_reconstruct(records[i], parity);
  return detail::integrate_density(quad, values, s, false);
}

}  // namespace spinps
