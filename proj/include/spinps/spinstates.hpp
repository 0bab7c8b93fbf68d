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

// Spin-J states: pure vectors, density matrices, named states and random
// ensembles.

#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <utility>

#include <Eigen/Eigenvalues>

#include "spinps/error.hpp"
#include "spinps/linalg.hpp"
#include "spinps/rng.hpp"
#include "spinps/specialfn.hpp"

namespace spinps {

inline constexpr double kStateTolerance = 1e-12;
inline constexpr double kPsdTolerance = 1e-10;

struct PureState {
  HalfInteger J;
  CVector amplitudes;  // m = J..-J

  void validate() const {
    if (amplitudes.size() != J.dim())
      throw DomainError("spinstates", "amplitude vector length must be 2J+1");
    if (std::abs(amplitudes.norm() - 1.0) > kStateTolerance)
      throw IntegrityError("spinstates", "pure state is not normalized");
  }
};

struct DensityMatrix {
  HalfInteger J;
  CMatrix matrix;  // rows/cols m = J..-J

  static DensityMatrix from_pure(const PureState& psi) {
    return {psi.J, psi.amplitudes * psi.amplitudes.adjoint()};
  }

  static DensityMatrix maximally_mixed(HalfInteger J) {
    const int n = J.dim();
    return {J, CMatrix::Identity(n, n) / static_cast<double>(n)};
  }

  void validate() const {
    const int n = J.dim();
    if (matrix.rows() != n || matrix.cols() != n)
      throw DomainError("spinstates", "density matrix must be (2J+1)x(2J+1)");
    if ((matrix - matrix.adjoint()).cwiseAbs().maxCoeff() > kStateTolerance)
      throw IntegrityError("spinstates", "density matrix is not Hermitian");
    if (std::abs(matrix.trace() - cplx(1.0)) > kStateTolerance)
      throw IntegrityError("spinstates", "density matrix trace differs from 1");
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(matrix, Eigen::EigenvaluesOnly);
    if (solver.eigenvalues().minCoeff() < -kPsdTolerance)
      throw IntegrityError("spinstates", "density matrix has a negative eigenvalue");
  }

  double purity() const { return (matrix * matrix).trace().real(); }
};

struct AngularMomentum {
  CMatrix x, y, z;
};

/// J_x, J_y, J_z in the m = J..-J basis.
inline AngularMomentum angular_momentum(HalfInteger J) {
  require_spin(J, "spinstates");
  const RMatrix jp = detail::raising_operator(J);
  const RMatrix jm = jp.transpose();
  AngularMomentum out;
  out.x = (0.5 * (jp + jm)).cast<cplx>();
  out.y = cplx(0.0, -0.5) * (jp - jm).cast<cplx>();
  RVector diag(J.dim());
  for (int i = 0; i < J.dim(); ++i) diag(i) = J.value() - i;
  out.z = diag.cast<cplx>().asDiagonal();
  return out;
}

/// exp(-i t H) for Hermitian H.
inline CMatrix hermitian_exponential(const CMatrix& h, double t) {
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(h);
  CVector phases = (solver.eigenvalues() * -t).unaryExpr([](double a) { return std::polar(1.0, a); });
  return solver.eigenvectors() * phases.asDiagonal() * solver.eigenvectors().adjoint();
}

/// Basis vector |J m>.
inline PureState basis_state(HalfInteger J, HalfInteger m) {
  require_spin(J, "spinstates");
  if ((J.twice() - m.twice()) % 2 != 0 || std::abs(m.twice()) > J.twice())
    throw DomainError("spinstates", "Dicke projection out of range for J");
  CVector v = CVector::Zero(J.dim());
  v((J.twice() - m.twice()) / 2) = 1.0;
  return {J, v};
}

enum class NamedState { kSpinUp, kDicke, kGhz, kSqueezed, kRndJ4Fixture };

struct NamedStateSpec {
  NamedState kind = NamedState::kSpinUp;
  HalfInteger dicke_m;         // kDicke
  double squeeze_angle = 0.3;  // kSqueezed
};

inline NamedState parse_named_state(const std::string& name) {
  if (name == "spin_up") return NamedState::kSpinUp;
  if (name == "dicke") return NamedState::kDicke;
  if (name == "ghz") return NamedState::kGhz;
  if (name == "squeezed") return NamedState::kSqueezed;
  if (name == "rnd_J4_fixture") return NamedState::kRndJ4Fixture;
  throw DomainError("spinstates", "unknown named state '" + name + "'");
}

/// Fixed spin-4 fixture given to two decimals, renormalized to unit norm.
inline CVector rnd_j4_fixture_amplitudes() {
  CVector v(9);
  v << cplx(0.06, 0.02), cplx(-0.21, -0.19), cplx(0.04, 0.27), cplx(0.15, -0.11), cplx(0.28, -0.28),
      cplx(-0.33, -0.25), cplx(0.04, -0.44), cplx(-0.21, -0.24), cplx(-0.43, 0.00);
  return v / v.norm();
}

inline PureState make_named_state(const NamedStateSpec& spec, HalfInteger J) {
  require_spin(J, "spinstates");
  switch (spec.kind) {
    case NamedState::kSpinUp:
      return basis_state(J, J);
    case NamedState::kDicke:
      return basis_state(J, spec.dicke_m);
    case NamedState::kGhz: {
      if (J.twice() == 0) throw DomainError("spinstates", "GHZ state needs J > 0");
      CVector v = CVector::Zero(J.dim());
      v(0) = v(J.dim() - 1) = 1.0 / std::sqrt(2.0);
      return {J, v};
    }
    case NamedState::kSqueezed: {
      // exp(-i theta J_y^2 / 2) |JJ>
      const CMatrix jy = angular_momentum(J).y;
      const CMatrix u = hermitian_exponential(jy * jy, 0.5 * spec.squeeze_angle);
      CVector v = u.col(0);
      return {J, v / v.norm()};
    }
    case NamedState::kRndJ4Fixture:
      if (J.twice() != 8) throw DomainError("spinstates", "rnd_J4_fixture exists only for J = 4");
      return {J, rnd_j4_fixture_amplitudes()};
  }
  throw DomainError("spinstates", "unhandled named state");
}

namespace detail {

inline cplx complex_normal(Stream& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  const double re = normal(rng);
  const double im = normal(rng);
  return {re, im};
}

}  // namespace detail

/// Haar-random pure state from normalized complex Gaussian amplitudes.
inline PureState random_pure(HalfInteger J, Stream& rng) {
  require_spin(J, "spinstates");
  CVector v(J.dim());
  for (int i = 0; i < J.dim(); ++i) v(i) = detail::complex_normal(rng);
  return {J, v / v.norm()};
}

inline PureState random_pure(HalfInteger J, std::uint64_t seed) {
  Stream rng = make_stream(seed, {0x70757265ULL});
  return random_pure(J, rng);
}

/// Hilbert-Schmidt random density matrix rho = G G^dagger / Tr(G G^dagger)
/// with G a square complex Ginibre matrix.
inline DensityMatrix random_hs(HalfInteger J, Stream& rng) {
  require_spin(J, "spinstates");
  const int n = J.dim();
  CMatrix g(n, n);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) g(i, k) = detail::complex_normal(rng);
  CMatrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  rho = 0.5 * (rho + rho.adjoint()).eval();
  return {J, rho};
}

inline DensityMatrix random_hs(HalfInteger J, std::uint64_t seed) {
  Stream rng = make_stream(seed, {0x68696c62ULL});
  return random_hs(J, rng);
}

}  // namespace spinps
