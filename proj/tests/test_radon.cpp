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


#include <gtest/gtest.h>

#include <cmath>

#include "spinps/quadrature.hpp"
#include "spinps/radon.hpp"
#include "spinps/tomography.hpp"
#include "test_util.hpp"

namespace {

using namespace spinps;
using spinps::testing::max_coeff_diff;
using spinps::testing::random_band_limited;

HalfInteger H(int twice) { return HalfInteger::from_twice(twice); }

DensityMatrix named(NamedState kind, HalfInteger J) {
  return DensityMatrix::from_pure(make_named_state({kind, HalfInteger{}, 0.3}, J));
}

// Relative L2 mismatch of 2 * symmetric part against f on the upper hemisphere.
double upper_hemisphere_mismatch(const SphericalFunction& f, const SphericalFunction& sym) {
  const QuadratureRule gl = gauss_legendre(60);
  double err = 0.0, norm = 0.0;
  for (std::size_t a = 0; a < gl.nodes.size(); ++a) {
    if (gl.nodes[a] <= 0.0) continue;
    for (int q = 0; q < 80; ++q) {
      const PhasePoint p(std::acos(gl.nodes[a]), 2 * kPi * q / 80);
      const double v = evaluate_series(f, p), d = 2 * evaluate_series(sym, p) - v;
      err += gl.weights[a] * d * d;
      norm += gl.weights[a] * v * v;
    }
  }
  return std::sqrt(err / norm);
}

TEST(RadonForward, AxialModeScaledByLegendreAtZero) {
  SphericalFunction f = SphericalFunction::zeros(H(4));
  f.coeff(2, 0) = 1.0;
  const SphericalFunction g = radon_forward(f);
  EXPECT_DOUBLE_EQ(g.coeff(2, 0).real(), -0.5);
}

TEST(RadonForward, AnnihilatesOddRanksExactly) {
  std::mt19937_64 rng(1);
  const SphericalFunction f = random_band_limited(H(15), rng);
  const SphericalFunction g = radon_forward(f);
  for (int j = 1; j <= 15; j += 2)
    for (int m = -j; m <= j; ++m) EXPECT_EQ(g.coeff(j, m), cplx(0.0));
  EXPECT_EQ(odd_rank_fraction(g), 0.0);
}

TEST(RadonForward, ProbabilityRouteMatchesHarmonicMultiplier) {
  for (int tj : {1, 5, 8, 13}) {
    const DensityMatrix rho = random_hs(H(tj), 90 + tj);
    for (double s : {-1.0, 0.0, 0.5}) {
      const SphericalFunction g = radon_forward(to_spherical_coeffs(rho, s));
      const ParityOperator mr = radon_parity(H(tj), s);
      for (double th = 0.0; th <= kPi; th += 0.45) {
        const PhasePoint p(th, 1.3 * th + 0.2);
        EXPECT_NEAR(radon_pointwise(probabilities(rho, p), mr), evaluate_series(g, p), 1e-10);
      }
    }
  }
}

TEST(RadonForward, GreatCircleQuadratureOracle) {
  std::mt19937_64 rng(4);
  const SphericalFunction f = to_spherical_coeffs(random_hs(H(6), 3), 0.0);
  const SphericalFunction g = radon_forward(f);
  for (const PhasePoint p : {PhasePoint(0, 0), PhasePoint(0.7, 2.0), PhasePoint(2.2, 4.1), PhasePoint(kPi / 2, 1)})
    EXPECT_NEAR(great_circle_average(f, p, 4096), evaluate_series(g, p), 1e-6);
}

TEST(GreatCircle, ConstantsAndOddModes) {
  SphericalFunction c = SphericalFunction::zeros(H(2));
  c.coeff(0, 0) = 3.0;
  EXPECT_NEAR(great_circle_average(c, PhasePoint(1.0, 1.0), 64), 3.0 / std::sqrt(4 * kPi), 1e-14);
  SphericalFunction y10 = SphericalFunction::zeros(H(2));
  y10.coeff(1, 0) = 1.0;
  EXPECT_NEAR(great_circle_average(y10, PhasePoint(0, 0), 64), 0.0, 1e-15);
  EXPECT_THROW(great_circle_average(c, PhasePoint(0, 0), 32), DomainError);
}

TEST(GreatCircle, ConvergesWithNodes) {
  const SphericalFunction f = to_spherical_coeffs(random_hs(H(20), 9), 0.0);
  const PhasePoint p(0.9, 0.4);
  const double exact = evaluate_series(radon_forward(f), p);
  // Band limit 20 along the circle: trapezoid is exact once nodes > 20.
  EXPECT_NEAR(great_circle_average(f, p, 64), exact, 1e-12);
  EXPECT_NEAR(great_circle_average(f, p, 256), exact, 1e-12);
}

TEST(RadonInverse, InverseOfForwardIsAntipodalSymmetrizer) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 20; ++trial) {
    const int tj = 1 + trial % 20;
    const SphericalFunction f = random_band_limited(H(tj), rng);
    const SphericalFunction sym = radon_inverse(radon_forward(f));
    for (double th = 0.0; th <= kPi; th += 0.5)
      for (double ph = 0.0; ph < 2 * kPi; ph += 1.1) {
        const PhasePoint p(th, ph);
        const double expect = 0.5 * (evaluate_series(f, p) + evaluate_series(f, p.antipode()));
        EXPECT_NEAR(evaluate_series(sym, p), expect, 1e-10 * std::max(1.0, f.max_abs_coeff()));
      }
  }
}

TEST(RadonInverse, ForwardOfInverseIsIdentityOnEvenRanks) {
  std::mt19937_64 rng(2);
  SphericalFunction f = random_band_limited(H(12), rng);
  for (int j = 1; j <= 12; j += 2)
    for (int m = -j; m <= j; ++m) f.coeff(j, m) = 0.0;
  EXPECT_LT(max_coeff_diff(radon_forward(radon_inverse(f)), f), 1e-12);
}

TEST(RadonInverse, RejectsOddContent) {
  std::mt19937_64 rng(3);
  try {
    radon_inverse(random_band_limited(H(4), rng));
    FAIL();
  } catch (const ContractError& e) {
    EXPECT_EQ(e.module(), "radon");
  }
}

TEST(RadonInverse, GhzWignerIsNotRecovered) {
  const SphericalFunction w = to_spherical_coeffs(named(NamedState::kGhz, H(5)), 0.0);
  EXPECT_GT(odd_rank_fraction(w), 0.1);
  const SphericalFunction back = radon_inverse(radon_forward(w));
  EXPECT_GT(max_coeff_diff(back, w), 0.1 * w.max_abs_coeff());
  EXPECT_GT(upper_hemisphere_mismatch(w, back), 0.5);
}

TEST(RadonSqueezed, TransformIsLocalizedAtEquator) {
  const HalfInteger J = HalfInteger::from_int(10);
  const SphericalFunction r = radon_forward(to_spherical_coeffs(named(NamedState::kSqueezed, J), 0.0));
  const QuadratureRule gl = gauss_legendre(60);
  double band = 0.0, total = 0.0, band_peak = 0.0, cap_peak = 0.0;
  for (std::size_t a = 0; a < gl.nodes.size(); ++a) {
    const double th = std::acos(gl.nodes[a]);
    for (int q = 0; q < 80; ++q) {
      const double v = evaluate_series(r, PhasePoint(th, 2 * kPi * q / 80));
      total += gl.weights[a] * v * v;
      if (std::abs(th - kPi / 2) < kPi / 6) {
        band += gl.weights[a] * v * v;
        band_peak = std::max(band_peak, std::abs(v));
      } else {
        cap_peak = std::max(cap_peak, std::abs(v));
      }
    }
  }
  // The band |theta - pi/2| < pi/6 covers half the sphere; measured 0.93 and 9x.
  EXPECT_GT(band / total, 0.9);
  EXPECT_GT(band_peak, 5 * cap_peak);
}

TEST(RadonSqueezed, SymmetricPartCarriesNorthernWigner) {
  const HalfInteger J = HalfInteger::from_int(10);
  const SphericalFunction w = to_spherical_coeffs(named(NamedState::kSqueezed, J), 0.0);
  const SphericalFunction back = radon_inverse(radon_forward(w));
  // 2 * symmetric part ~ W where W lives; measured 0.057.
  EXPECT_LT(upper_hemisphere_mismatch(w, back), 0.1);
}

}  // namespace
