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

#pragma once

#include <algorithm>
#include <cmath>
#include <optional>

#include "spinps/error.hpp"
#include "spinps/parity.hpp"
#include "spinps/phasespace.hpp"

namespace spinps {

/// Relative size of m != 0 kernel coefficients tolerated as "axially symmetric".
inline constexpr double kAxialTolerance = 1e-12;

/// Spherical convolution with an axially symmetric kernel, done in harmonic
/// space (Funk-Hecke): c'_jm = c_jm k_j0 R^2 sqrt(4 pi / (2j+1)).
///
/// The result's s tag is s_f + s_k - 1 when both inputs carry one.
inline SphericalFunction convolve(const SphericalFunction& kernel, const SphericalFunction& f) {
  f.require_compatible(kernel);
  double max_axial = 0.0, max_off = 0.0;
  for (int j = 0; j <= kernel.twice_J; ++j)
    for (int m = -j; m <= j; ++m) {
      const double a = std::abs(kernel.coeff(j, m));
      if (m == 0)
        max_axial = std::max(max_axial, a);
      else
        max_off = std::max(max_off, a);
    }
  if (max_off > kAxialTolerance * max_axial)
    throw ContractError("convolution", "kernel is not axially symmetric");

  SphericalFunction out = f;
  const double r2 = f.radius * f.radius;
  for (int j = 0; j <= f.twice_J; ++j) {
    const cplx factor = kernel.coeff(j, 0) * r2 * std::sqrt(4.0 * kPi / (2.0 * j + 1.0));
    for (int m = -j; m <= j; ++m) out.coeff(j, m) *= factor;
  }
  if (f.s_tag && kernel.s_tag)
    out.s_tag = *f.s_tag + *kernel.s_tag - 1.0;
  else
    out.s_tag.reset();
  return out;
}

/// Type-s function to type-(s + s' - 1): c_jm -> gamma_j^{1-s'} c_jm. This is
/// the coefficient form of convolving with the spin-up function at s'.
inline SphericalFunction transform_s(const SphericalFunction& f, double s_prime) {
  if (!f.s_tag) throw DomainError("convolution", "transform_s needs a function with an s tag");
  const GammaCoefficients g = gamma(f.J());
  SphericalFunction out = f;
  for (int j = 0; j <= f.twice_J; ++j) {
    const double factor = g.power(j, 1.0 - s_prime, "convolution");
    for (int m = -j; m <= j; ++m) out.coeff(j, m) *= factor;
  }
  out.s_tag = *f.s_tag + s_prime - 1.0;
  return out;
}

/// max_j gamma_j^{1-s'} / min_j gamma_j^{1-s'}: how much transform_s can
/// amplify relative noise between ranks.
inline double transform_condition_number(HalfInteger J, double s_prime) {
  const GammaCoefficients g = gamma(J);
  double lo = g.log_values.front(), hi = lo;
  for (double v : g.log_values) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  return std::exp(std::abs(1.0 - s_prime) * (hi - lo));
}

}  // namespace spinps
