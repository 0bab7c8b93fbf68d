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
#include <random>

#include "spinps/phasespace.hpp"
#include "spinps/quadrature.hpp"

namespace {

using namespace spinps;

HalfInteger H(int twice) { return HalfInteger::from_twice(twice); }

DensityMatrix spin_up(int tj) { return DensityMatrix::from_pure(basis_state(H(tj), H(tj))); }

// Random Hermitian (not necessarily positive) operator.
CMatrix random_hermitian(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  CMatrix a(n, n);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) a(i, k) = cplx(g(rng), g(rng));
  return 0.5 * (a + a.adjoint());
}

// Quadrature oracle for integrals over the radius-R sphere, exact for band
// limit <= 2 * (n_theta - 1) in theta and < n_phi in phi.
double quadrature_integral(const SphericalFunction& f, int n_theta, int n_phi) {
  const QuadratureRule gl = gauss_legendre(n_theta);
  double acc = 0.0;
  for (std::size_t a = 0; a < gl.nodes.size(); ++a)
    for (int q = 0; q < n_phi; ++q)
      acc += gl.weights[a] * (2 * kPi / n_phi) * evaluate_series(f, PhasePoint(std::acos(gl.nodes[a]), 2 * kPi * q / n_phi));
  return acc * f.radius * f.radius;
}

TEST(EvaluateDirect, MaximallyMixedIsConstant) {
  for (double s : {-1.0, 0.0, 0.5}) {
    const DensityMatrix rho = DensityMatrix::maximally_mixed(H(5));
    const double expect = parity_operator(H(5), s).trace() / 6.0;
    for (double th : {0.0, 0.8, 2.9}) EXPECT_NEAR(evaluate_direct(rho, PhasePoint(th, 1.1 * th), s), expect, 1e-13);
  }
}

TEST(EvaluateDirect, SpinUpQIsCoherentOverlap) {
  for (int tj : {1, 4, 10, 40}) {
    for (double th = 0.0; th <= kPi; th += 0.1)
      EXPECT_NEAR(evaluate_direct(spin_up(tj), PhasePoint(th, 0.3), -1.0), std::pow(std::cos(th / 2), 2 * tj), 1e-12);
    EXPECT_NEAR(evaluate_direct(spin_up(tj), PhasePoint(kPi, 0.0), -1.0), 0.0, 1e-14);
  }
}

TEST(Coefficients, MaximallyMixedHasOnlyMonopole) {
  const SphericalFunction f = to_spherical_coeffs(DensityMatrix::maximally_mixed(H(6)), 0.0);
  EXPECT_GT(std::abs(f.coeff(0, 0)), 0.0);
  for (std::size_t i = 1; i < f.coeffs.size(); ++i) EXPECT_LT(std::abs(f.coeffs[i]), 1e-15);
}

TEST(Coefficients, SeriesMatchesDirectRoute) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> th(0.0, kPi), ph(0.0, 2 * kPi);
  for (int tj : {1, 4, 5, 10, 20, 50, 100}) {
    const DensityMatrix rho = random_hs(H(tj), 17 + tj);
    for (double s : {-1.0, -0.5, 0.0, 0.5}) {
      const SphericalFunction f = to_spherical_coeffs(rho, s);
      f.validate();
      const ParityOperator parity = parity_operator(H(tj), s);
      // absolute 1e-10 on the scale of the largest parity weight
      const double tol = 1e-10 * std::max(1.0, parity.diag.cwiseAbs().maxCoeff());
      for (int k = 0; k < 50; ++k) {
        const PhasePoint p(th(rng), ph(rng));
        EXPECT_NEAR(evaluate_series(f, p), evaluate_direct(rho, p, parity), tol) << tj << ' ' << s;
      }
    }
  }
}

TEST(Coefficients, SpinUpIsTheKernel) {
  for (int tj : {1, 6, 13})
    for (double s : {-1.0, 0.0, 0.3, 1.0}) {
      const SphericalFunction f = to_spherical_coeffs(spin_up(tj), s);
      const SphericalFunction k = kernel_function(H(tj), s);
      const auto g = gamma(H(tj));
      for (int j = 0; j <= tj; ++j)
        for (int m = -j; m <= j; ++m) {
          const double expect =
              m == 0 ? std::sqrt((2 * j + 1) / (4 * kPi)) * std::pow(g.values[j], 1 - s) / (g.radius * g.radius) : 0.0;
          EXPECT_NEAR(std::abs(f.coeff(j, m) - expect), 0.0, 1e-11 * std::max(1.0, expect));
          EXPECT_NEAR(std::abs(k.coeff(j, m) - expect), 0.0, 1e-11 * std::max(1.0, expect));
        }
    }
}

TEST(Coefficients, DeltaKernelForS1) {
  const auto g = gamma(H(7));
  const SphericalFunction k = kernel_function(H(7), 1.0);
  for (int j = 0; j <= 7; ++j)
    EXPECT_NEAR(k.coeff(j, 0).real(), std::sqrt((2 * j + 1) / (4 * kPi)) / (g.radius * g.radius), 1e-12);
}

TEST(Series, ConstantAndLinearity) {
  SphericalFunction f = SphericalFunction::zeros(H(3), 0.0);
  f.coeff(0, 0) = 1.0;
  EXPECT_NEAR(evaluate_series(f, PhasePoint(1.0, 2.0)), 1.0 / std::sqrt(4 * kPi), 1e-15);
  const SphericalFunction a = to_spherical_coeffs(random_hs(H(3), 1), 0.0);
  const SphericalFunction b = to_spherical_coeffs(random_hs(H(3), 2), 0.0);
  const PhasePoint p(0.4, 5.0);
  EXPECT_NEAR(evaluate_series(2.0 * a + (-3.0) * b, p), 2 * evaluate_series(a, p) - 3 * evaluate_series(b, p), 1e-13);
}

TEST(Series, GridMatchesPointwise) {
  const SphericalFunction f = to_spherical_coeffs(random_hs(H(6), 8), -0.5);
  const std::vector<double> th = {0.0, 0.5, 1.7, kPi}, ph = {0.0, 1.0, 4.0};
  const auto grid = evaluate_grid(f, th, ph);
  for (std::size_t k = 0; k < th.size(); ++k)
    for (std::size_t q = 0; q < ph.size(); ++q)
      EXPECT_NEAR(grid[k * ph.size() + q], evaluate_series(f, PhasePoint(th[k], ph[q])), 1e-14);
}

TEST(Series, RealityViolationRejected) {
  SphericalFunction f = SphericalFunction::zeros(H(2), 0.0);
  f.coeff(1, 1) = cplx(1.0, 0.0);
  EXPECT_THROW(f.validate(), IntegrityError);
  EXPECT_THROW(evaluate_series(f, PhasePoint(1.0, 0.5)), IntegrityError);
}

TEST(Integrals, NormalizationContract) {
  SphericalFunction unit = SphericalFunction::zeros(H(3), 0.0);
  unit.coeff(0, 0) = 1.0 / (unit.radius * unit.radius * std::sqrt(4 * kPi));
  EXPECT_NEAR(integrate_sphere(unit), 1.0, 1e-15);
  for (int tj : {1, 5, 9})
    for (double s : {-1.0, -0.5, 0.0, 0.5, 1.0}) {
      const SphericalFunction f = to_spherical_coeffs(random_hs(H(tj), 40 + tj), s);
      const double g0 = gamma(H(tj)).values[0];
      EXPECT_NEAR(integrate_sphere(f), std::pow(g0, 1 - s), 1e-12);
      EXPECT_NEAR(quadrature_integral(f, tj + 1, tj + 1), integrate_sphere(f), 1e-10);
    }
  EXPECT_NEAR(integrate_sphere(to_spherical_coeffs(random_hs(H(4), 3), 1.0)), 1.0, 1e-12);
}

TEST(Integrals, TracePairingDuality) {
  std::mt19937_64 rng(99);
  for (int tj = 1; tj <= 10; ++tj)
    for (double s : {-1.0, -0.5, 0.0, 0.5, 1.0}) {
      const CMatrix a = random_hermitian(tj + 1, rng), b = random_hermitian(tj + 1, rng);
      const SphericalFunction fa = to_spherical_coeffs({H(tj), a}, s);
      const SphericalFunction fb = to_spherical_coeffs({H(tj), b}, -s);
      EXPECT_NEAR(inner_product(fa, fb), (a * b).trace().real(), 1e-9 * std::max(1.0, a.norm() * b.norm()));
    }
}

TEST(Integrals, PairingByQuadrature) {
  std::mt19937_64 rng(7);
  const int tj = 4;
  const CMatrix a = random_hermitian(tj + 1, rng), b = random_hermitian(tj + 1, rng);
  const SphericalFunction fa = to_spherical_coeffs({H(tj), a}, 0.0);
  const SphericalFunction fb = to_spherical_coeffs({H(tj), b}, 0.0);
  const QuadratureRule gl = gauss_legendre(2 * tj + 1);
  const int nphi = 2 * tj + 1;
  double acc = 0.0;
  for (std::size_t k = 0; k < gl.nodes.size(); ++k)
    for (int q = 0; q < nphi; ++q) {
      const PhasePoint p(std::acos(gl.nodes[k]), 2 * kPi * q / nphi);
      acc += gl.weights[k] * (2 * kPi / nphi) * evaluate_series(fa, p) * evaluate_series(fb, p);
    }
  EXPECT_NEAR(acc * fa.radius * fa.radius, (a * b).trace().real(), 1e-10);
}

TEST(Covariance, RotationFoldsIntoMeasurement) {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> th(0.0, kPi), ph(0.0, 2 * kPi);
  for (int trial = 0; trial < 20; ++trial) {
    const int tj = 1 + trial % 7;
    const DensityMatrix rho = random_hs(H(tj), 500 + trial);
    const PhasePoint omega(th(rng), ph(rng));
    const CMatrix u = rotation_matrix(H(tj), omega);
    // F_{U^dag rho U}(north) = F_rho(omega) since R(north) = I.
    const DensityMatrix rotated{H(tj), u.adjoint() * rho.matrix * u};
    for (double s : {-1.0, 0.0, 1.0})
      EXPECT_NEAR(evaluate_direct(rotated, PhasePoint(0, 0), s), evaluate_series(to_spherical_coeffs(rho, s), omega),
                  1e-10);
  }
}

TEST(Positivity, HusimiIsNonNegative) {
  for (int tj : {1, 5, 12}) {
    const SphericalFunction q = to_spherical_coeffs(random_hs(H(tj), tj), -1.0);
    std::vector<double> th(41), ph(40);
    for (int k = 0; k <= 40; ++k) th[k] = kPi * k / 40;
    for (int k = 0; k < 40; ++k) ph[k] = 2 * kPi * k / 40;
    for (double v : evaluate_grid(q, th, ph)) EXPECT_GE(v, -1e-12);
  }
}

TEST(Symmetry, GhzFiveFold) {
  const DensityMatrix ghz = DensityMatrix::from_pure(make_named_state({NamedState::kGhz, HalfInteger{}, 0.3}, H(5)));
  for (double s : {-1.0, 0.0, 1.0}) {
    const SphericalFunction f = to_spherical_coeffs(ghz, s);
    for (double th = 0.1; th < kPi; th += 0.37)
      for (double ph = 0.0; ph < 2 * kPi; ph += 0.61)
        EXPECT_NEAR(evaluate_series(f, PhasePoint(th, ph)), evaluate_series(f, PhasePoint(th, ph + 2 * kPi / 5)), 1e-10);
  }
}

TEST(GridMaximum, SpinUpPeaksAtNorthPole) {
  const SphericalFunction q = kernel_function(H(5), -1.0);
  EXPECT_NEAR(grid_maximum(q), 1.0, 1e-12);
}

TEST(Planar, ReferenceValues) {
  EXPECT_DOUBLE_EQ(planar_reference(PlanarReference::kVacuumW, 0.0), 2.0);
  EXPECT_DOUBLE_EQ(planar_reference(PlanarReference::kVacuumQ, 0.0), 1.0);
  EXPECT_DOUBLE_EQ(planar_reference(PlanarReference::kSinglePhotonW, 0.0), -2.0);
  // Fock-1 Wigner function integrates to 1 over d^2 alpha / pi... here with
  // measure d^2 alpha: 2 (4 r^2 - 1) e^{-2 r^2} 2 pi r dr -> pi / 2 * 0 + ...
  double acc = 0.0;
  const int n = 20000;
  for (int k = 0; k < n; ++k) {
    const double r = 8.0 * (k + 0.5) / n;
    acc += planar_reference(PlanarReference::kSinglePhotonW, r) * 2 * kPi * r * (8.0 / n);
  }
  EXPECT_NEAR(acc / kPi, 1.0, 1e-6);
  EXPECT_THROW(parse_planar_reference("thermal"), DomainError);
}

TEST(Planar, LimitErrorsShrinkWithJ) {
  EXPECT_LT(planar_limit_error(H(20), -1.0, LimitState::kSpinUp), planar_limit_error(H(4), -1.0, LimitState::kSpinUp));
  double prev = INFINITY;
  for (int J : {5, 10, 20, 40}) {
    const double e = planar_limit_error(HalfInteger::from_int(J), 0.0, LimitState::kSpinUp);
    EXPECT_LT(e, prev) << J;
    prev = e;
  }
  EXPECT_THROW(planar_limit_error(H(4), 0.5, LimitState::kSpinUp), DomainError);
}

TEST(Planar, NorthPoleMatchesToRounding) {
  // M_{-1} is assembled from the full rank sum, so "exact" means rounding level.
  for (int tj : {2, 10, 30})
    EXPECT_NEAR(evaluate_direct(spin_up(tj), PhasePoint(0, 0), -1.0), planar_reference(PlanarReference::kVacuumQ, 0.0),
                1e-12);
}

}  // namespace
