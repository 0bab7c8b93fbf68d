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

// s-parametrized phase-space functions of spin-J states.
//
// Two evaluation routes are provided and cross-checked against each other:
//  * the direct route, F(Omega) = sum_m [M_s]_mm <Jm|R^dag rho R|Jm>;
//  * the coefficient route, a band-limited spherical-harmonics series.

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "spinps/error.hpp"
#include "spinps/linalg.hpp"
#include "spinps/parity.hpp"
#include "spinps/specialfn.hpp"
#include "spinps/spinstates.hpp"

namespace spinps {

inline constexpr double kRealityTolerance = 1e-10;
inline constexpr double kSeriesImagTolerance = 1e-9;

using PhasePoint = RotationAngles;

/// Band-limited function on the radius-R sphere, stored as coefficients c_jm
/// of orthonormal unit-sphere harmonics, 0 <= j <= 2J, packed at j^2 + j + m.
struct SphericalFunction {
  int twice_J = 0;
  double radius = 0.0;
  std::vector<cplx> coeffs;
  std::optional<double> s_tag;

  static SphericalFunction zeros(HalfInteger J, std::optional<double> s = std::nullopt) {
    const int l = J.twice();
    return {J.twice(), sphere_radius(J), std::vector<cplx>(static_cast<std::size_t>(l + 1) * (l + 1)), s};
  }

  HalfInteger J() const { return HalfInteger::from_twice(twice_J); }
  int band_limit() const { return twice_J; }

  static std::size_t index(int j, int m) { return static_cast<std::size_t>(j * j + j + m); }
  cplx& coeff(int j, int m) { return coeffs[index(j, m)]; }
  const cplx& coeff(int j, int m) const { return coeffs[index(j, m)]; }

  double max_abs_coeff() const {
    double mx = 0.0;
    for (const cplx& c : coeffs) mx = std::max(mx, std::abs(c));
    return mx;
  }

  /// Largest violation of c_jm^* = (-1)^m c_{j,-m}.
  double reality_defect() const {
    double worst = 0.0;
    for (int j = 0; j <= twice_J; ++j)
      for (int m = 0; m <= j; ++m) {
        const double sign = (m % 2 == 0) ? 1.0 : -1.0;
        worst = std::max(worst, std::abs(std::conj(coeff(j, m)) - sign * coeff(j, -m)));
      }
    return worst;
  }

  void validate() const {
    const std::size_t expected = static_cast<std::size_t>(twice_J + 1) * (twice_J + 1);
    if (twice_J < 0 || coeffs.size() != expected)
      throw DomainError("phasespace", "coefficient count must be (2J+1)^2 for band limit 2J");
    if (!(radius > 0.0)) throw DomainError("phasespace", "sphere radius must be positive");
    if (reality_defect() > kRealityTolerance * std::max(1.0, max_abs_coeff()))
      throw IntegrityError("phasespace", "coefficients violate the reality condition");
  }

  SphericalFunction& operator+=(const SphericalFunction& o) {
    require_compatible(o);
    for (std::size_t i = 0; i < coeffs.size(); ++i) coeffs[i] += o.coeffs[i];
    return *this;
  }
  SphericalFunction& operator*=(double a) {
    for (cplx& c : coeffs) c *= a;
    return *this;
  }
  friend SphericalFunction operator+(SphericalFunction a, const SphericalFunction& b) { return a += b; }
  friend SphericalFunction operator*(double a, SphericalFunction f) { return f *= a; }

  void require_compatible(const SphericalFunction& o) const {
    if (o.twice_J != twice_J) throw DomainError("phasespace", "band limits differ");
    if (std::abs(o.radius - radius) > 1e-14 * radius) throw DomainError("phasespace", "sphere radii differ");
  }
};

// ---------------------------------------------------------------------------
// Direct route

/// <Jm| R^dag rho R |Jm> for every m (raw, unclamped).
inline RVector rotated_populations(const DensityMatrix& rho, const CMatrix& rotation) {
  const CMatrix rotated = rotation.adjoint() * rho.matrix * rotation;
  const CVector d = rotated.diagonal();
  if (d.imag().cwiseAbs().maxCoeff() > kRealityTolerance)
    throw IntegrityError("phasespace", "rotated populations are not real");
  return d.real();
}

inline double evaluate_direct(const DensityMatrix& rho, const PhasePoint& point, const ParityOperator& parity) {
  if (parity.J.twice() != rho.J.twice()) throw DomainError("phasespace", "parity operator and state spins differ");
  return parity.diag.dot(rotated_populations(rho, rotation_matrix(rho.J, point)));
}

/// F_rho(Omega, s) = Tr[rho R M_s R^dag].
inline double evaluate_direct(const DensityMatrix& rho, const PhasePoint& point, double s) {
  return evaluate_direct(rho, point, parity_operator(rho.J, s));
}

// ---------------------------------------------------------------------------
// Coefficient route

/// Coefficients c_jm of F_rho(., s): c_jm = (-1)^m Tr(rho T_jm) / (R gamma_j^s).
///
/// The sign and order follow from R(theta, phi) = exp(i phi J_z) exp(i theta J_y):
/// R T_j0 R^dag = sqrt(4pi/(2j+1)) sum_m (-1)^m Y_jm(theta, phi) T_jm, so these
/// coefficients reproduce the direct route pointwise.
inline SphericalFunction to_spherical_coeffs(const DensityMatrix& rho, double s) {
  require_positive_spin(rho.J, "phasespace");
  const HalfInteger J = rho.J;
  const GammaCoefficients g = gamma(J);
  SphericalFunction f = SphericalFunction::zeros(J, s);
  const int n = J.dim();
  const auto diags = detail::tensor_diagonals(J);
  for (int j = 0; j <= J.twice(); ++j) {
    const double scale = 1.0 / (g.radius * g.power(j, s, "phasespace"));
    for (int m = 0; m <= j; ++m) {
      // Tr(rho T_jm) = sum_e rho(e+m, e) [T_jm]_{e, e+m}
      const auto d = diags->by_order[m].row(j - m);
      cplx tr = 0.0;
      for (int e = 0; e + m < n; ++e) tr += rho.matrix(e + m, e) * d(e);
      const double sign = (m % 2 == 0) ? 1.0 : -1.0;
      f.coeff(j, m) = sign * tr * scale;
      // T_{j,-m} = (-1)^m T_jm^dagger gives c_{j,-m} from the transpose diagonal.
      if (m > 0) {
        cplx tr_neg = 0.0;
        for (int e = 0; e + m < n; ++e) tr_neg += rho.matrix(e, e + m) * d(e);
        f.coeff(j, -m) = tr_neg * scale;
      }
    }
  }
  return f;
}

namespace detail {

/// Upper bound on |F| from the coefficients, used to scale reality checks.
inline double series_scale(const SphericalFunction& f) {
  double scale = 0.0;
  for (int j = 0; j <= f.twice_J; ++j) {
    const double ymax = std::sqrt((2.0 * j + 1.0) / (4.0 * kPi));
    for (int m = -j; m <= j; ++m) scale += std::abs(f.coeff(j, m)) * ymax;
  }
  return scale;
}

/// Per-theta azimuthal Fourier coefficients: F(theta, phi) = sum_{|m|<=L} a_m e^{i m phi}.
inline std::vector<cplx> azimuthal_modes(const SphericalFunction& f, const LegendreTable& table) {
  const int l = f.twice_J;
  std::vector<cplx> a(2 * l + 1, 0.0);
  for (int m = 0; m <= l; ++m) {
    const double sign = (m % 2 == 0) ? 1.0 : -1.0;
    cplx pos = 0.0, neg = 0.0;
    for (int j = m; j <= l; ++j) {
      const double lam = table(j, m);
      pos += f.coeff(j, m) * lam;
      if (m > 0) neg += f.coeff(j, -m) * (sign * lam);
    }
    a[l + m] = pos;
    if (m > 0) a[l - m] = neg;
  }
  return a;
}

inline double checked_real(cplx v, double scale) {
  if (std::abs(v.imag()) > kSeriesImagTolerance * std::max(1.0, scale))
    throw IntegrityError("phasespace", "series evaluation has a non-negligible imaginary part");
  return v.real();
}

}  // namespace detail

/// sum_jm c_jm Y_jm(theta, phi).
inline double evaluate_series(const SphericalFunction& f, const PhasePoint& point) {
  const LegendreTable table(f.twice_J, point.theta());
  const std::vector<cplx> a = detail::azimuthal_modes(f, table);
  cplx sum = 0.0;
  const int l = f.twice_J;
  for (int m = -l; m <= l; ++m) sum += a[l + m] * std::polar(1.0, m * point.phi());
  return detail::checked_real(sum, detail::series_scale(f));
}

/// Series values on a tensor grid, row-major in theta then phi.
inline std::vector<double> evaluate_grid(const SphericalFunction& f, std::span<const double> thetas,
                                         std::span<const double> phis) {
  const int l = f.twice_J;
  const double scale = detail::series_scale(f);
  // e^{i m phi_q} for m = -L..L
  std::vector<cplx> phase(phis.size() * (2 * l + 1));
  for (std::size_t q = 0; q < phis.size(); ++q)
    for (int m = -l; m <= l; ++m) phase[q * (2 * l + 1) + (m + l)] = std::polar(1.0, m * phis[q]);
  std::vector<double> out(thetas.size() * phis.size());
  for (std::size_t k = 0; k < thetas.size(); ++k) {
    const LegendreTable table(l, thetas[k]);
    const std::vector<cplx> a = detail::azimuthal_modes(f, table);
    for (std::size_t q = 0; q < phis.size(); ++q) {
      const cplx* ph = &phase[q * (2 * l + 1)];
      cplx sum = 0.0;
      for (int i = 0; i < 2 * l + 1; ++i) sum += a[i] * ph[i];
      out[k * phis.size() + q] = detail::checked_real(sum, scale);
    }
  }
  return out;
}

/// Maximum of the series over an n_theta x n_phi grid (theta endpoints
/// included, phi periodic).
inline double grid_maximum(const SphericalFunction& f, int n_theta = 512, int n_phi = 512) {
  std::vector<double> thetas(n_theta), phis(n_phi);
  for (int k = 0; k < n_theta; ++k) thetas[k] = kPi * k / (n_theta - 1);
  for (int q = 0; q < n_phi; ++q) phis[q] = 2.0 * kPi * q / n_phi;
  const std::vector<double> values = evaluate_grid(f, thetas, phis);
  return *std::max_element(values.begin(), values.end());
}

/// Phase-space function of the spin-up state:
/// c_j0 = sqrt((2j+1)/4pi) gamma_j^{1-s} / R^2, all other c_jm = 0.
inline SphericalFunction kernel_function(HalfInteger J, double s) {
  const GammaCoefficients g = gamma(J);
  SphericalFunction f = SphericalFunction::zeros(J, s);
  const double r2 = g.radius * g.radius;
  for (int j = 0; j <= J.twice(); ++j)
    f.coeff(j, 0) = std::sqrt((2.0 * j + 1.0) / (4.0 * kPi)) * g.power(j, 1.0 - s, "phasespace") / r2;
  return f;
}

/// Integral over the radius-R sphere, R^2 sqrt(4 pi) Re c_00.
inline double integrate_sphere(const SphericalFunction& f) {
  return f.radius * f.radius * std::sqrt(4.0 * kPi) * f.coeff(0, 0).real();
}

/// Integral of f * conj(g) over the radius-R sphere, by coefficient contraction.
inline double inner_product(const SphericalFunction& f, const SphericalFunction& g) {
  f.require_compatible(g);
  cplx acc = 0.0;
  for (std::size_t i = 0; i < f.coeffs.size(); ++i) acc += f.coeffs[i] * std::conj(g.coeffs[i]);
  return f.radius * f.radius * acc.real();
}

inline double l2_norm(const SphericalFunction& f) { return std::sqrt(std::max(0.0, inner_product(f, f))); }

// ---------------------------------------------------------------------------
// Planar (infinite-dimensional) reference functions

enum class PlanarReference { kVacuumQ, kVacuumW, kSinglePhotonW };

inline PlanarReference parse_planar_reference(const std::string& name) {
  if (name == "vacuum_Q") return PlanarReference::kVacuumQ;
  if (name == "vacuum_W") return PlanarReference::kVacuumW;
  if (name == "single_photon_W") return PlanarReference::kSinglePhotonW;
  throw DomainError("phasespace", "unknown planar reference '" + name + "'");
}

inline double planar_reference(PlanarReference which, cplx alpha) {
  const double a2 = std::norm(alpha);
  switch (which) {
    case PlanarReference::kVacuumQ:
      return std::exp(-a2);
    case PlanarReference::kVacuumW:
      return 2.0 * std::exp(-2.0 * a2);
    case PlanarReference::kSinglePhotonW:
      return 2.0 * (4.0 * a2 - 1.0) * std::exp(-2.0 * a2);
  }
  throw DomainError("phasespace", "unhandled planar reference");
}

/// Spin states with a planar limit: spin-up -> vacuum, |J, J-1> -> one photon.
enum class LimitState { kSpinUp, kDicke };

inline LimitState parse_limit_state(const std::string& name) {
  if (name == "spin_up") return LimitState::kSpinUp;
  if (name == "dicke") return LimitState::kDicke;
  throw DomainError("phasespace", "unknown limit state '" + name + "' (spin_up|dicke)");
}

/// Maximum of |F_spin(theta, 0) - F_planar(alpha(theta))| over 200 uniform
/// theta in [0, pi/2], with arc length a = theta R and alpha = sqrt(pi) a.
inline double planar_limit_error(HalfInteger J, double s, LimitState state) {
  require_positive_spin(J, "phasespace");
  PlanarReference ref;
  DensityMatrix rho;
  if (state == LimitState::kSpinUp) {
    if (s == -1.0)
      ref = PlanarReference::kVacuumQ;
    else if (s == 0.0)
      ref = PlanarReference::kVacuumW;
    else
      throw DomainError("phasespace", "spin-up planar limit is tabulated only for s = -1 and s = 0");
    rho = DensityMatrix::from_pure(basis_state(J, J));
  } else {
    if (s != 0.0) throw DomainError("phasespace", "Dicke planar limit is tabulated only for s = 0");
    rho = DensityMatrix::from_pure(basis_state(J, J - HalfInteger::from_int(1)));
    ref = PlanarReference::kSinglePhotonW;
  }
  const ParityOperator parity = parity_operator(J, s);
  const double radius = sphere_radius(J);
  constexpr int kPoints = 200;
  double worst = 0.0;
  for (int k = 0; k < kPoints; ++k) {
    const double theta = 0.5 * kPi * k / (kPoints - 1);
    const double spin = evaluate_direct(rho, PhasePoint(theta, 0.0), parity);
    const cplx alpha = std::sqrt(kPi) * theta * radius;
    worst = std::max(worst, std::abs(spin - planar_reference(ref, alpha)));
  }
  return worst;
}

}  // namespace spinps
