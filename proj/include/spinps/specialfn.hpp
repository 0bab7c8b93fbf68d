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

// Angular-momentum special functions: log factorials, Legendre polynomials,
// orthonormal spherical harmonics, Clebsch-Gordan coefficients and SU(2)
// rotation matrices. All phase conventions are Condon-Shortley.
//
// Basis ordering: every (2J+1)-dimensional vector or matrix in this library
// is indexed by i = 0..2J with m = J - i, i.e. m runs J, J-1, ..., -J.

#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "spinps/error.hpp"
#include "spinps/linalg.hpp"

namespace spinps {

/// Integer or half-integer quantity stored as twice its value.
class HalfInteger {
 public:
  constexpr HalfInteger() = default;

  static constexpr HalfInteger from_twice(int twice) { return HalfInteger(twice); }
  static constexpr HalfInteger from_int(int value) { return HalfInteger(2 * value); }

  constexpr int twice() const noexcept { return twice_; }
  constexpr double value() const noexcept { return 0.5 * twice_; }
  constexpr bool is_integer() const noexcept { return twice_ % 2 == 0; }

  /// Dimension 2J+1 of the spin-J representation.
  constexpr int dim() const noexcept { return twice_ + 1; }

  friend constexpr bool operator==(HalfInteger a, HalfInteger b) { return a.twice_ == b.twice_; }
  friend constexpr HalfInteger operator+(HalfInteger a, HalfInteger b) {
    return HalfInteger(a.twice_ + b.twice_);
  }
  friend constexpr HalfInteger operator-(HalfInteger a, HalfInteger b) {
    return HalfInteger(a.twice_ - b.twice_);
  }
  constexpr HalfInteger operator-() const { return HalfInteger(-twice_); }

 private:
  constexpr explicit HalfInteger(int twice) : twice_(twice) {}
  int twice_ = 0;
};

/// Checks that J is a valid spin magnitude.
inline void require_spin(HalfInteger J, const char* module) {
  if (J.twice() < 0) throw DomainError(module, "spin number must be non-negative");
}

/// Polar/azimuthal angle pair, canonicalized to theta in [0, pi], phi in [0, 2pi).
class RotationAngles {
 public:
  RotationAngles() = default;
  RotationAngles(double theta, double phi) {
    if (!std::isfinite(theta) || !std::isfinite(phi))
      throw DomainError("specialfn", "rotation angles must be finite");
    constexpr double two_pi = 2.0 * kPi;
    theta = std::fmod(theta, two_pi);
    if (theta < 0) theta += two_pi;
    if (theta > kPi) {
      theta = two_pi - theta;
      phi += kPi;
    }
    phi = std::fmod(phi, two_pi);
    if (phi < 0) phi += two_pi;
    if (phi >= two_pi) phi = 0.0;
    theta_ = theta;
    phi_ = phi;
  }

  double theta() const noexcept { return theta_; }
  double phi() const noexcept { return phi_; }

  /// The antipodal point (pi - theta, phi + pi).
  RotationAngles antipode() const { return RotationAngles(kPi - theta_, phi_ + kPi); }

 private:
  double theta_ = 0.0;
  double phi_ = 0.0;
};

// ---------------------------------------------------------------------------
// Factorials

namespace detail {

inline constexpr int kLogFactorialTableSize = 301;

inline const std::array<double, kLogFactorialTableSize>& log_factorial_table() {
  static const auto table = [] {
    std::array<double, kLogFactorialTableSize> t{};
    long double acc = 0.0L;
    t[0] = 0.0;
    for (int n = 1; n < kLogFactorialTableSize; ++n) {
      acc += std::log(static_cast<long double>(n));
      t[n] = static_cast<double>(acc);
    }
    return t;
  }();
  return table;
}

}  // namespace detail

/// ln(n!). Tabulated for n <= 300, log-gamma beyond.
inline double log_factorial(int n) {
  if (n < 0) throw DomainError("specialfn", "log_factorial of negative integer");
  if (n < detail::kLogFactorialTableSize) return detail::log_factorial_table()[n];
  return std::lgamma(static_cast<double>(n) + 1.0);
}

// ---------------------------------------------------------------------------
// Legendre polynomials and spherical harmonics

/// P_j(x) by the three-term recurrence. Odd j at x = 0 yields exact zeros.
inline double legendre_p(int j, double x) {
  if (j < 0) throw DomainError("specialfn", "legendre_p degree must be non-negative");
  if (!(std::abs(x) <= 1.0)) throw DomainError("specialfn", "legendre_p argument outside [-1, 1]");
  if (j == 0) return 1.0;
  double p_prev = 1.0;
  double p = x;
  for (int k = 1; k < j; ++k) {
    const double next = ((2 * k + 1) * x * p - k * p_prev) / (k + 1);
    p_prev = p;
    p = next;
  }
  return p;
}

/// Y_jm(theta, 0) for all 0 <= m <= j <= lmax at a fixed theta, i.e. the
/// orthonormal associated Legendre functions including the Condon-Shortley
/// phase and the 1/sqrt(4 pi) factor. Stored packed at j(j+1)/2 + m.
class LegendreTable {
 public:
  LegendreTable(int lmax, double theta) : lmax_(lmax), values_(packed_size(lmax), 0.0) {
    if (lmax < 0) throw DomainError("specialfn", "negative band limit");
    const double x = std::cos(theta);
    const double y = std::sin(theta);
    double diag = 1.0 / std::sqrt(4.0 * kPi);
    for (int m = 0; m <= lmax; ++m) {
      if (m > 0) diag *= -std::sqrt((2.0 * m + 1.0) / (2.0 * m)) * y;
      at(m, m) = diag;
      if (m + 1 <= lmax) at(m + 1, m) = std::sqrt(2.0 * m + 3.0) * x * diag;
      for (int l = m + 2; l <= lmax; ++l) {
        const double l2 = static_cast<double>(l) * l;
        const double m2 = static_cast<double>(m) * m;
        const double a = std::sqrt((4.0 * l2 - 1.0) / (l2 - m2));
        const double lm1 = l - 1.0;
        const double b = std::sqrt((lm1 * lm1 - m2) / (4.0 * lm1 * lm1 - 1.0));
        at(l, m) = a * (x * at(l - 1, m) - b * at(l - 2, m));
      }
    }
  }

  int lmax() const noexcept { return lmax_; }

  /// Y_jm(theta, 0) for m >= 0.
  double operator()(int j, int m) const { return values_[index(j, m)]; }

  static std::size_t packed_size(int lmax) {
    return static_cast<std::size_t>(lmax + 1) * (lmax + 2) / 2;
  }

 private:
  static std::size_t index(int j, int m) { return static_cast<std::size_t>(j) * (j + 1) / 2 + m; }
  double& at(int j, int m) { return values_[index(j, m)]; }

  int lmax_;
  std::vector<double> values_;
};

/// Orthonormal Y_jm on the unit sphere, Condon-Shortley phase. Negative m is
/// produced from the m > 0 value by Y_{j,-m} = (-1)^m conj(Y_jm).
inline cplx spherical_harmonic(int j, int m, const RotationAngles& angles) {
  if (j < 0 || std::abs(m) > j) throw DomainError("specialfn", "spherical_harmonic requires |m| <= j");
  const int am = std::abs(m);
  const LegendreTable table(j, angles.theta());
  const cplx positive = table(j, am) * std::polar(1.0, am * angles.phi());
  if (m >= 0) return positive;
  return (am % 2 == 0 ? 1.0 : -1.0) * std::conj(positive);
}

// ---------------------------------------------------------------------------
// Clebsch-Gordan coefficients

namespace detail {

/// Neumaier-compensated accumulator.
class CompensatedSum {
 public:
  void add(double v) {
    const double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v))
      comp_ += (sum_ - t) + v;
    else
      comp_ += (v - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

inline void require_projection(HalfInteger j, HalfInteger m) {
  if (j.twice() < 0) throw DomainError("specialfn", "negative angular momentum");
  if ((j.twice() - m.twice()) % 2 != 0)
    throw DomainError("specialfn", "projection parity does not match its angular momentum");
  if (std::abs(m.twice()) > j.twice()) throw DomainError("specialfn", "projection out of range");
}

}  // namespace detail

/// <j1 m1; j2 m2 | j m> in the Condon-Shortley convention via the Racah sum
/// evaluated term-by-term in log-factorial form.
inline double clebsch_gordan(HalfInteger j1, HalfInteger m1, HalfInteger j2, HalfInteger m2,
                             HalfInteger j, HalfInteger m) {
  detail::require_projection(j1, m1);
  detail::require_projection(j2, m2);
  detail::require_projection(j, m);
  if (m1.twice() + m2.twice() != m.twice()) return 0.0;
  const int tj1 = j1.twice(), tj2 = j2.twice(), tj = j.twice();
  if ((tj1 + tj2 + tj) % 2 != 0) return 0.0;
  if (tj < std::abs(tj1 - tj2) || tj > tj1 + tj2) return 0.0;

  // Integer arguments of the factorials (all twice-values halved).
  const int a = (tj1 + tj2 - tj) / 2;
  const int b = (tj1 - tj2 + tj) / 2;
  const int c = (-tj1 + tj2 + tj) / 2;
  const int d = (tj1 + tj2 + tj) / 2 + 1;
  const int jm1 = (tj1 - m1.twice()) / 2, jp1 = (tj1 + m1.twice()) / 2;
  const int jm2 = (tj2 - m2.twice()) / 2, jp2 = (tj2 + m2.twice()) / 2;
  const int jm = (tj - m.twice()) / 2, jp = (tj + m.twice()) / 2;

  const double log_prefactor =
      0.5 * (std::log(tj + 1.0) + log_factorial(a) + log_factorial(b) + log_factorial(c) -
             log_factorial(d) + log_factorial(jp) + log_factorial(jm) + log_factorial(jm1) +
             log_factorial(jp1) + log_factorial(jm2) + log_factorial(jp2));

  // k ranges so that every factorial argument is non-negative.
  const int e = (tj - tj2 + m1.twice()) / 2;  // j - j2 + m1
  const int f = (tj - tj1 - m2.twice()) / 2;  // j - j1 - m2
  const int kmin = std::max({0, -e, -f});
  const int kmax = std::min({a, jm1, jp2});

  detail::CompensatedSum sum;
  for (int k = kmin; k <= kmax; ++k) {
    const double log_den = log_factorial(k) + log_factorial(a - k) + log_factorial(jm1 - k) +
                           log_factorial(jp2 - k) + log_factorial(e + k) + log_factorial(f + k);
    const double term = std::exp(log_prefactor - log_den);
    sum.add(k % 2 == 0 ? term : -term);
  }
  return sum.value();
}

// ---------------------------------------------------------------------------
// Rotation matrices

namespace detail {

/// Raising operator J+ in the m = J..-J basis (real, superdiagonal).
inline RMatrix raising_operator(HalfInteger J) {
  const int n = J.dim();
  const double j = J.value();
  RMatrix jp = RMatrix::Zero(n, n);
  for (int i = 1; i < n; ++i) {
    const double m = j - i;
    jp(i - 1, i) = std::sqrt(j * (j + 1.0) - m * (m + 1.0));
  }
  return jp;
}

/// Eigen-decomposition of J_y. Cached per J; entries are immutable once
/// published and the map is mutex-guarded.
struct JyEigensystem {
  RVector eigenvalues;
  CMatrix eigenvectors;
};

inline std::shared_ptr<const JyEigensystem> jy_eigensystem(HalfInteger J) {
  static std::mutex mutex;
  static std::map<int, std::shared_ptr<const JyEigensystem>> cache;
  {
    std::lock_guard lock(mutex);
    if (auto it = cache.find(J.twice()); it != cache.end()) return it->second;
  }
  const RMatrix jp = raising_operator(J);
  // J_y = (J+ - J-) / (2i) = -i/2 (J+ - J+^T)
  const CMatrix jy = cplx(0.0, -0.5) * (jp - jp.transpose()).cast<cplx>();
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(jy);
  auto sys = std::make_shared<JyEigensystem>();
  // The spectrum is exactly {-J, ..., J}; snap away rounding noise.
  sys->eigenvalues = (2.0 * solver.eigenvalues().array()).round() / 2.0;
  sys->eigenvectors = solver.eigenvectors();
  std::lock_guard lock(mutex);
  return cache.emplace(J.twice(), std::move(sys)).first->second;
}

}  // namespace detail

/// Wigner small-d matrix d^J_{mm'}(theta) = <Jm| exp(-i theta J_y) |Jm'>,
/// rows and columns ordered m = J..-J. Real orthogonal.
///
/// Evaluated as V diag(exp(-i theta mu)) V^dagger from the spectral
/// decomposition of J_y. Explicit Wigner sums lose most significant digits
/// to cancellation beyond J ~ 20, which this route avoids.
inline RMatrix wigner_small_d(HalfInteger J, double theta) {
  require_spin(J, "specialfn");
  const auto sys = detail::jy_eigensystem(J);
  const int n = J.dim();
  CVector phases(n);
  for (int k = 0; k < n; ++k) phases(k) = std::polar(1.0, -theta * sys->eigenvalues(k));
  const CMatrix& v = sys->eigenvectors;
  const CMatrix d = v * phases.asDiagonal() * v.adjoint();
  return d.real();
}

/// R(theta, phi) = exp(+i phi J_z) exp(+i theta J_y), elementwise
/// [R]_{mm'} = e^{i m phi} d^J_{m'm}(theta).
inline CMatrix rotation_matrix(HalfInteger J, const RotationAngles& angles) {
  const RMatrix d = wigner_small_d(J, angles.theta());
  const int n = J.dim();
  CMatrix r(n, n);
  for (int i = 0; i < n; ++i) {
    const double m = J.value() - i;
    const cplx phase = std::polar(1.0, m * angles.phi());
    for (int k = 0; k < n; ++k) r(i, k) = phase * d(k, i);
  }
  return r;
}

}  // namespace spinps
