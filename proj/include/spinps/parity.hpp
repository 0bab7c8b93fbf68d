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

// Rank weights gamma_j, spherical tensor operators T_jm and the diagonal
// parity operators M_s whose rotated expectation values are the
// s-parametrized phase-space functions.

#pragma once

#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "spinps/error.hpp"
#include "spinps/linalg.hpp"
#include "spinps/specialfn.hpp"

namespace spinps {

/// Weights larger than this are reported as a conditioning failure.
inline constexpr double kWeightOverflow = 1e300;

/// Radius sqrt(J / 2pi) of the spherical phase space.
inline double sphere_radius(HalfInteger J) { return std::sqrt(J.value() / (2.0 * kPi)); }

inline void require_positive_spin(HalfInteger J, const char* module) {
  if (J.twice() <= 0) throw DomainError(module, "spin number must be positive");
}

struct GammaCoefficients {
  HalfInteger J;
  double radius = 0.0;
  std::vector<double> values;      // gamma_j, j = 0..2J
  std::vector<double> log_values;  // ln gamma_j

  /// gamma_j^power evaluated in the log domain; throws if it would overflow.
  double power(int j, double exponent, const char* module) const {
    const double lg = exponent * log_values[j];
    if (lg > std::log(kWeightOverflow))
      throw ConditioningError(module, "gamma_" + std::to_string(j) + "^" + std::to_string(exponent) +
                                          " exceeds 1e300");
    return std::exp(lg);
  }
};

/// gamma_j = R sqrt(4 pi) (2J)! / sqrt((2J+j+1)! (2J-j)!), j = 0..2J.
inline GammaCoefficients gamma(HalfInteger J) {
  require_positive_spin(J, "parity");
  GammaCoefficients g;
  g.J = J;
  g.radius = sphere_radius(J);
  const int tj = J.twice();
  const double base = std::log(g.radius) + 0.5 * std::log(4.0 * kPi) + log_factorial(tj);
  for (int j = 0; j <= tj; ++j) {
    const double lg = base - 0.5 * (log_factorial(tj + j + 1) + log_factorial(tj - j));
    g.log_values.push_back(lg);
    g.values.push_back(std::exp(lg));
  }
  return g;
}

/// Diagonals of T_j0 for j = 0..2J as rows of a (2J+1)x(2J+1) matrix.
///
/// The T_j0 are orthonormal polynomials of degree j in J_z under the trace
/// inner product, i.e. discrete Chebyshev (Gram) polynomials on m = -J..J,
/// positive at m = J. Their Jacobi matrix (zero diagonal, off-diagonal
/// sqrt(beta_k), beta_k = k^2 (N^2 - k^2) / (4 (4k^2 - 1))) has spectrum
/// {-J..J}, and its unit eigenvector for eigenvalue m is the column
/// (p_0(m), ..., p_2J(m)). Diagonalizing is stable at any J; both the Racah
/// sum and the forward recurrence blow up near the endpoints for J >~ 20.
inline RMatrix zeroth_order_diagonals(HalfInteger J) {
  require_spin(J, "parity");
  const int n = J.dim();
  const double nn = static_cast<double>(n) * n;
  RMatrix jacobi = RMatrix::Zero(n, n);
  for (int k = 1; k < n; ++k) {
    const double k2 = static_cast<double>(k) * k;
    jacobi(k, k - 1) = jacobi(k - 1, k) = std::sqrt(k2 * (nn - k2) / (4.0 * (4.0 * k2 - 1.0)));
  }
  Eigen::SelfAdjointEigenSolver<RMatrix> solver(jacobi);
  RMatrix q(n, n);
  // Eigenvalues ascend (m = -J first); column index i carries m = J - i.
  for (int i = 0; i < n; ++i) {
    RVector v = solver.eigenvectors().col(n - 1 - i);
    if (v(0) < 0.0) v = -v;
    q.col(i) = v;
  }
  return q;
}

namespace detail {

/// Nonzero diagonals of the T_jm, m >= 0. Entry [m] is an (N-m)x(N-m)
/// matrix whose row j-m holds [T_jm]_{e, e+m}, e = 0..N-m-1.
struct TensorDiagonals {
  std::vector<RMatrix> by_order;
};

/// For fixed m the T_jm span the m-th superdiagonal and are eigenvectors of
/// the Casimir superoperator X -> sum_a [J_a, [J_a, X]] with eigenvalue
/// j(j+1). Restricted to that diagonal it is symmetric tridiagonal with well
/// separated eigenvalues. m = 0 comes from the Gram construction (positive at
/// m1 = J, i.e. <J J; j 0 | J J> > 0) and each further order is sign-fixed by
/// T_{j,m+1} ~ +[J_+, T_jm].
inline TensorDiagonals build_tensor_diagonals(HalfInteger J) {
  const int n = J.dim();
  const double jj = J.value() * (J.value() + 1.0);
  auto a_plus = [jj](double mu) { return std::sqrt(std::max(0.0, jj - mu * (mu + 1.0))); };
  auto a_minus = [jj](double mu) { return std::sqrt(std::max(0.0, jj - mu * (mu - 1.0))); };
  TensorDiagonals out;
  out.by_order.push_back(zeroth_order_diagonals(J));
  for (int m = 1; m < n; ++m) {
    const int len = n - m;
    RMatrix casimir = RMatrix::Zero(len, len);
    for (int e = 0; e < len; ++e) {
      const double alpha = J.value() - e;      // row projection m1
      const double beta = alpha - m;           // column projection m2
      casimir(e, e) = 2.0 * jj - 2.0 * alpha * beta;
      if (e + 1 < len) casimir(e, e + 1) = casimir(e + 1, e) = -a_minus(alpha) * a_minus(beta);
    }
    Eigen::SelfAdjointEigenSolver<RMatrix> solver(casimir);
    const RMatrix& prev = out.by_order.back();  // order m-1, length len+1
    RMatrix cur(len, len);
    for (int k = 0; k < len; ++k) {  // eigenvalues ascend with j = m + k
      RVector u = solver.eigenvectors().col(k);
      // [J_+, T_{j,m-1}] on the m-th diagonal, row j - (m-1) = k + 1 of prev.
      const auto p = prev.row(k + 1);
      double overlap = 0.0;
      for (int e = 0; e < len; ++e) {
        const double v = a_plus(J.value() - e - 1.0) * p(e + 1) - p(e) * a_plus(J.value() - e - m);
        overlap += v * u(e);
      }
      if (overlap < 0.0) u = -u;
      cur.row(k) = u.transpose();
    }
    out.by_order.push_back(std::move(cur));
  }
  return out;
}

inline std::shared_ptr<const TensorDiagonals> tensor_diagonals(HalfInteger J) {
  static std::mutex mutex;
  static std::map<int, std::shared_ptr<const TensorDiagonals>> cache;
  {
    std::lock_guard lock(mutex);
    if (auto it = cache.find(J.twice()); it != cache.end()) return it->second;
  }
  auto built = std::make_shared<const TensorDiagonals>(build_tensor_diagonals(J));
  std::lock_guard lock(mutex);
  return cache.emplace(J.twice(), std::move(built)).first->second;
}

}  // namespace detail

/// [T_jm]_{m1 m2} = sqrt((2j+1)/(2J+1)) <J m2; j m | J m1>, Condon-Shortley
/// phases. Built from the stable diagonals above, not from Racah sums.
inline CMatrix tensor_op(HalfInteger J, int j, int m) {
  require_spin(J, "parity");
  if (j < 0 || j > J.twice() || std::abs(m) > j)
    throw DomainError("parity", "tensor operator rank/order out of range");
  const int n = J.dim();
  const int am = std::abs(m);
  const auto diags = detail::tensor_diagonals(J);
  const RMatrix& d = diags->by_order[am];
  CMatrix t = CMatrix::Zero(n, n);
  for (int e = 0; e < n - am; ++e) t(e, e + am) = d(j - am, e);
  // T_{j,-m} = (-1)^m T_jm^dagger
  if (m < 0) t = ((am % 2 == 0) ? 1.0 : -1.0) * t.adjoint().eval();
  return t;
}

enum class ParityKind { kStandard, kRadon };

struct ParityOperator {
  HalfInteger J;
  double s = 0.0;
  RVector diag;  // [M]_mm, m = J..-J
  ParityKind kind = ParityKind::kStandard;

  double trace() const { return diag.sum(); }
};

namespace detail {

inline ParityOperator assemble_parity(HalfInteger J, double s, ParityKind kind) {
  require_positive_spin(J, "parity");
  if (!std::isfinite(s)) throw DomainError("parity", "s must be finite");
  const GammaCoefficients g = gamma(J);
  const RMatrix t = zeroth_order_diagonals(J);
  const int n = J.dim();
  const double log_overflow = std::log(kWeightOverflow);
  ParityOperator op{J, s, RVector::Zero(n), kind};
  for (int j = 0; j <= J.twice(); ++j) {
    double sign = 1.0;
    if (kind == ParityKind::kRadon) {
      const double p0 = legendre_p(j, 0.0);
      if (p0 == 0.0) continue;
      sign = p0;
    }
    const double log_weight =
        -std::log(g.radius) + 0.5 * std::log((2.0 * j + 1.0) / (4.0 * kPi)) - s * g.log_values[j];
    const double log_row_max = std::log(t.row(j).cwiseAbs().maxCoeff());
    if (log_weight + log_row_max + std::log(std::abs(sign)) > log_overflow)
      throw ConditioningError("parity", "parity weight for rank j=" + std::to_string(j) +
                                            " exceeds 1e300 (s=" + std::to_string(s) + ")");
    op.diag += (sign * std::exp(log_weight)) * t.row(j).transpose();
  }
  if (!op.diag.allFinite() || op.diag.cwiseAbs().maxCoeff() > kWeightOverflow)
    throw ConditioningError("parity", "parity weights exceed 1e300");
  return op;
}

}  // namespace detail

/// M_s = (1/R) sum_j sqrt((2j+1)/4pi) gamma_j^{-s} T_j0 (diagonal only).
inline ParityOperator parity_operator(HalfInteger J, double s) {
  return detail::assemble_parity(J, s, ParityKind::kStandard);
}

/// Great-circle variant: each rank additionally weighted by P_j(0), so odd
/// ranks drop out exactly.
inline ParityOperator radon_parity(HalfInteger J, double s) {
  return detail::assemble_parity(J, s, ParityKind::kRadon);
}

}  // namespace spinps
