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


// Shared test helpers.

#pragma once

#include <cmath>
#include <random>

#include "spinps/phasespace.hpp"

namespace spinps::testing {

/// Real band-limited function with standard-normal coefficients obeying
/// c_{j,-m} = (-1)^m conj(c_jm).
inline SphericalFunction random_band_limited(HalfInteger J, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  SphericalFunction f = SphericalFunction::zeros(J);
  for (int j = 0; j <= J.twice(); ++j) {
    f.coeff(j, 0) = g(rng);
    for (int m = 1; m <= j; ++m) {
      const cplx c(g(rng), g(rng));
      f.coeff(j, m) = c;
      f.coeff(j, -m) = (m % 2 == 0 ? 1.0 : -1.0) * std::conj(c);
    }
  }
  return f;
}

/// Random Hermitian matrix with complex Gaussian entries.
inline CMatrix random_hermitian(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  CMatrix a(n, n);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) a(i, k) = cplx(g(rng), g(rng));
  return 0.5 * (a + a.adjoint());
}

inline double max_coeff_diff(const SphericalFunction& a, const SphericalFunction& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.coeffs.size(); ++i) worst = std::max(worst, std::abs(a.coeffs[i] - b.coeffs[i]));
  return worst;
}

}  // namespace spinps::testing
