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

// Spherical (Funk) Radon transform: the great-circle mean of a function,
// which multiplies rank j by P_j(0) and therefore loses all odd ranks.

#pragma once

#include <algorithm>
#include <cmath>

#include "spinps/error.hpp"
#include "spinps/parity.hpp"
#include "spinps/phasespace.hpp"
#include "spinps/specialfn.hpp"

namespace spinps {

inline constexpr double kOddRankTolerance = 1e-9;

/// c_jm -> P_j(0) c_jm.
inline SphericalFunction radon_forward(const SphericalFunction& f) {
  SphericalFunction g = f;
  for (int j = 0; j <= f.twice_J; ++j) {
    const double p0 = legendre_p(j, 0.0);
    for (int m = -j; m <= j; ++m) g.coeff(j, m) *= p0;
  }
  return g;
}

/// sqrt(sum over odd j of |c_jm|^2) / sqrt(sum of all |c_jm|^2).
inline double odd_rank_fraction(const SphericalFunction& f) {
  double odd = 0.0, total = 0.0;
  for (int j = 0; j <= f.twice_J; ++j)
    for (int m = -j; m <= j; ++m) {
      const double a = std::norm(f.coeff(j, m));
      total += a;
      if (j % 2 == 1) odd += a;
    }
  return total > 0.0 ? std::sqrt(odd / total) : 0.0;
}

/// Inverse on the even-rank subspace: c_jm / P_j(0) for even j. The result
/// is the point-symmetric part (f(Omega) + f(-Omega)) / 2 of any preimage.
inline SphericalFunction radon_inverse(const SphericalFunction& g) {
  if (odd_rank_fraction(g) > kOddRankTolerance)
    throw ContractError("radon", "input has odd-rank content and is not a great-circle transform");
  SphericalFunction f = g;
  for (int j = 0; j <= g.twice_J; ++j) {
    const double p0 = legendre_p(j, 0.0);
    for (int m = -j; m <= j; ++m) f.coeff(j, m) = (j % 2 == 0) ? f.coeff(j, m) / p0 : cplx(0.0);
  }
  return f;
}

/// Mean of f over the great circle orthogonal to the direction of `point`,
/// by the trapezoid rule with `nodes` points.
inline double great_circle_average(const SphericalFunction& f, const PhasePoint& point, int nodes) {
  if (nodes < 64) throw DomainError("radon", "great-circle average needs at least 64 nodes");
  const double st = std::sin(point.theta()), ct = std::cos(point.theta());
  const double sp = std::sin(point.phi()), cp = std::cos(point.phi());
  // Orthonormal pair spanning the plane orthogonal to n = (st cp, st sp, ct).
  const double e1[3] = {ct * cp, ct * sp, -st};
  const double e2[3] = {-sp, cp, 0.0};
  double sum = 0.0;
  for (int k = 0; k < nodes; ++k) {
    const double t = 2.0 * kPi * k / nodes;
    const double x = std::cos(t) * e1[0] + std::sin(t) * e2[0];
    const double y = std::cos(t) * e1[1] + std::sin(t) * e2[1];
    const double z = std::cos(t) * e1[2] + std::sin(t) * e2[2];
    sum += evaluate_series(f, PhasePoint(std::acos(std::clamp(z, -1.0, 1.0)), std::atan2(y, x)));
  }
  return sum / nodes;
}

/// Radon transform of F(., s) at one point straight from outcome
/// probabilities: sum_m [M^R_s]_mm p_m.
inline double radon_pointwise(const RVector& probs, const ParityOperator& radon) {
  if (radon.kind != ParityKind::kRadon) throw DomainError("radon", "expected a Radon parity operator");
  if (probs.size() != radon.diag.size()) throw DomainError("radon", "probability vector has wrong length");
  return radon.diag.dot(probs);
}

}  // namespace spinps
