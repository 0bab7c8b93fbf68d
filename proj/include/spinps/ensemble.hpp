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

// Monte-Carlo tomography experiments over random state ensembles and the
// error statistics reported for them.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "spinps/convolution.hpp"
#include "spinps/error.hpp"
#include "spinps/parallel.hpp"
#include "spinps/phasespace.hpp"
#include "spinps/rng.hpp"
#include "spinps/spinstates.hpp"
#include "spinps/tomography.hpp"

namespace spinps {

// ---------------------------------------------------------------------------
// Statistics

namespace stats {

inline double mean(const std::vector<double>& x) {
  if (x.empty()) return 0.0;
  return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

/// Sample standard deviation (n - 1 denominator).
inline double stddev(const std::vector<double>& x) {
  if (x.size() < 2) return 0.0;
  const double mu = mean(x);
  double acc = 0.0;
  for (double v : x) acc += (v - mu) * (v - mu);
  return std::sqrt(acc / static_cast<double>(x.size() - 1));
}

/// Sample skewness g1 = m3 / m2^{3/2}.
inline double skewness(const std::vector<double>& x) {
  if (x.size() < 3) return 0.0;
  const double mu = mean(x);
  double m2 = 0.0, m3 = 0.0;
  for (double v : x) {
    const double d = v - mu;
    m2 += d * d;
    m3 += d * d * d;
  }
  m2 /= static_cast<double>(x.size());
  m3 /= static_cast<double>(x.size());
  return m2 > 0.0 ? m3 / std::pow(m2, 1.5) : 0.0;
}

/// Least-squares slope of log(y) against log(x).
inline double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw DomainError("ensemble", "slope needs at least two points");
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < x.size(); ++i) {
    lx.push_back(std::log(x[i]));
    ly.push_back(std::log(y[i]));
  }
  const double mx = mean(lx), my = mean(ly);
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxy += (lx[i] - mx) * (ly[i] - my);
    sxx += (lx[i] - mx) * (lx[i] - mx);
  }
  return sxy / sxx;
}

struct GaussianFit {
  double mu = 0.0;
  double sigma = 0.0;
};

inline GaussianFit fit_gaussian(const std::vector<double>& x) { return {mean(x), stddev(x)}; }

/// Log-normal fit by the moments of log(x); requires strictly positive data.
struct LogNormalFit {
  double mu = 0.0;
  double sigma = 0.0;
  bool positive_support = true;
};

inline LogNormalFit fit_lognormal(const std::vector<double>& x) {
  LogNormalFit fit;
  std::vector<double> logs;
  for (double v : x) {
    if (!(v > 0.0)) {
      fit.positive_support = false;
      continue;
    }
    logs.push_back(std::log(v));
  }
  fit.mu = mean(logs);
  fit.sigma = stddev(logs);
  return fit;
}

/// Lower `quantile` of the paired-bootstrap distribution of stddev(a)/stddev(b).
inline double bootstrap_sigma_ratio_quantile(const std::vector<double>& a, const std::vector<double>& b,
                                             int resamples, std::uint64_t seed, double quantile) {
  if (a.size() != b.size() || a.size() < 2) throw DomainError("ensemble", "bootstrap needs paired samples");
  Stream rng = make_stream(seed, {0x626f6f74ULL});
  std::uniform_int_distribution<std::size_t> pick(0, a.size() - 1);
  std::vector<double> ratios;
  ratios.reserve(resamples);
  std::vector<double> ra(a.size()), rb(b.size());
  for (int r = 0; r < resamples; ++r) {
    for (std::size_t i = 0; i < a.size(); ++i) {
      const std::size_t k = pick(rng);
      ra[i] = a[k];
      rb[i] = b[k];
    }
    ratios.push_back(stddev(ra) / stddev(rb));
  }
  std::sort(ratios.begin(), ratios.end());
  const auto idx = static_cast<std::size_t>(std::floor(quantile * (ratios.size() - 1)));
  return ratios[idx];
}

}  // namespace stats

// ---------------------------------------------------------------------------
// Experiment configuration and report

enum class ExperimentMode { kPointwise, kGrid, kFull, kCompare3x3 };

inline ExperimentMode parse_mode(const std::string& name) {
  if (name == "pointwise") return ExperimentMode::kPointwise;
  if (name == "grid") return ExperimentMode::kGrid;
  if (name == "full") return ExperimentMode::kFull;
  if (name == "compare3x3") return ExperimentMode::kCompare3x3;
  throw DomainError("ensemble", "unknown experiment mode '" + name + "'");
}

inline std::string mode_name(ExperimentMode mode) {
  switch (mode) {
    case ExperimentMode::kPointwise: return "pointwise";
    case ExperimentMode::kGrid: return "grid";
    case ExperimentMode::kFull: return "full";
    case ExperimentMode::kCompare3x3: return "compare3x3";
  }
  return "?";
}

enum class StateEnsemble { kHilbertSchmidt, kHaarPure };

struct ExperimentConfig {
  int twice_J = 5;
  double s = 0.0;
  int n_rho = 2200;
  /// Repetition numbers; 0 means exact probabilities (infinitely many shots).
  std::vector<std::int64_t> n_r = {100, 1000, 10000};
  int n_p = 22;
  std::uint64_t seed = 1;
  ExperimentMode mode = ExperimentMode::kFull;
  StateEnsemble ensemble = StateEnsemble::kHilbertSchmidt;
  unsigned threads = 0;

  HalfInteger J() const { return HalfInteger::from_twice(twice_J); }

  void validate() const {
    if (twice_J <= 0) throw DomainError("ensemble", "twice_J must be positive");
    if (n_rho < 2) throw DomainError("ensemble", "N_rho must be at least 2");
    if (n_r.empty()) throw DomainError("ensemble", "N_r list is empty");
    for (auto v : n_r)
      if (v < 0) throw DomainError("ensemble", "N_r entries must be >= 0 (0 = exact)");
    GridSpec{n_p}.validate_for(J());
  }
};

/// The three s values of the P/W/Q comparison, in that order.
inline constexpr std::array<double, 3> kCompareS = {1.0, 0.0, -1.0};

struct ComparisonBlock {
  /// errors[src][dst][state]: reconstructed directly at kCompareS[src],
  /// converted to kCompareS[dst]. Pointwise at (0,0), relative to the ideal
  /// function's global maximum; L2 relative to the ideal L2 norm.
  std::array<std::array<std::vector<double>, 3>, 3> pointwise;
  std::array<std::array<std::vector<double>, 3>, 3> l2;
};

struct RepetitionResult {
  std::int64_t n_r = 0;
  std::vector<double> pointwise;     // (F^ - F)(0,0) / max F
  std::vector<double> grid_average;  // mean over grid of (F^ - F) / max F
  std::vector<double> l2;            // ||f^ - f||_2 / ||f||_2
  stats::GaussianFit pointwise_fit;
  stats::GaussianFit grid_fit;
  stats::LogNormalFit l2_fit;
  double l2_mean = 0.0;
  double pointwise_skewness = 0.0;
  std::optional<ComparisonBlock> comparison;
};

struct EnsembleErrorReport {
  ExperimentConfig config;
  std::vector<RepetitionResult> results;
  /// log-log slopes against N_r over the finite N_r values (if >= 2).
  std::optional<double> pointwise_sigma_exponent;
  std::optional<double> grid_sigma_exponent;
  std::optional<double> l2_mean_exponent;
};

namespace detail {

struct IdealState {
  DensityMatrix rho;
  std::vector<RVector> probs;           // per grid point
  std::array<SphericalFunction, 3> f;   // ideal functions per s slot
  std::array<double, 3> max{};          // global maxima
  std::array<double, 3> norm{};         // L2 norms
};

struct StateErrors {
  std::vector<double> pointwise, grid, l2;  // per N_r
  std::vector<std::array<std::array<double, 3>, 3>> cmp_point, cmp_l2;
};

}  // namespace detail

/// Runs the configured ensemble experiment. Results depend only on the config
/// (including its seed), never on the thread count.
inline EnsembleErrorReport run_ensemble_experiment(const ExperimentConfig& config) {
  config.validate();
  const HalfInteger J = config.J();
  const GridSpec grid{config.n_p};
  const bool compare = config.mode == ExperimentMode::kCompare3x3;
  const bool want_grid = config.mode != ExperimentMode::kPointwise;
  const bool want_l2 = config.mode == ExperimentMode::kFull || compare;

  // s slots: slot 0 is the configured s in the standard modes; all three
  // comparison values in compare mode.
  std::vector<double> s_values = compare ? std::vector<double>(kCompareS.begin(), kCompareS.end())
                                         : std::vector<double>{config.s};
  std::vector<ParityOperator> parities;
  for (double s : s_values) parities.push_back(parity_operator(J, s));

  std::vector<CMatrix> rotations;
  rotations.reserve(grid.size());
  for (int k = 0; k < grid.n_p; ++k)
    for (int q = 0; q < grid.n_p; ++q) rotations.push_back(rotation_matrix(J, PhasePoint(grid.theta(k), grid.phi(q))));

  const std::size_t n_states = static_cast<std::size_t>(config.n_rho);
  const std::size_t n_reps = config.n_r.size();
  std::vector<detail::StateErrors> per_state(n_states);

  parallel_for(n_states, config.threads, [&](std::size_t i) {
    detail::IdealState ideal;
    Stream state_rng = make_stream(config.seed, {1, i});
    if (config.ensemble == StateEnsemble::kHilbertSchmidt)
      ideal.rho = random_hs(J, state_rng);
    else
      ideal.rho = DensityMatrix::from_pure(random_pure(J, state_rng));
    for (const CMatrix& r : rotations) ideal.probs.push_back(probabilities(ideal.rho, r));
    for (std::size_t a = 0; a < s_values.size(); ++a) {
      ideal.f[a] = to_spherical_coeffs(ideal.rho, s_values[a]);
      ideal.max[a] = grid_maximum(ideal.f[a]);
      ideal.norm[a] = l2_norm(ideal.f[a]);
    }

    detail::StateErrors& out = per_state[i];
    for (std::size_t r = 0; r < n_reps; ++r) {
      const std::int64_t n_r = config.n_r[r];
      std::vector<RVector> freqs(rotations.size());
      for (std::size_t g = 0; g < rotations.size(); ++g) {
        if (n_r == 0) {
          freqs[g] = ideal.probs[g];
        } else {
          Stream rng = make_stream(config.seed, {2, i, static_cast<std::uint64_t>(n_r), g});
          const auto counts = sample_multinomial(ideal.probs[g], n_r, rng);
          RVector f(counts.size());
          for (std::size_t m = 0; m < counts.size(); ++m)
            f(static_cast<Eigen::Index>(m)) = static_cast<double>(counts[m]) / static_cast<double>(n_r);
          freqs[g] = f;
        }
      }

      // Direct reconstructions per s slot.
      std::vector<SphericalFunction> recon(s_values.size());
      for (std::size_t a = 0; a < s_values.size(); ++a) {
        GridSamples samples{grid, std::vector<double>(rotations.size())};
        double grid_err = 0.0;
        for (std::size_t g = 0; g < rotations.size(); ++g) {
          samples.values[g] = pointwise_reconstruct(freqs[g], parities[a]);
          grid_err += samples.values[g] - pointwise_reconstruct(ideal.probs[g], parities[a]);
        }
        if (a == 0 && !compare) {
          // grid index 0 is (theta, phi) = (0, 0)
          out.pointwise.push_back((samples.values[0] - pointwise_reconstruct(ideal.probs[0], parities[0])) /
                                  ideal.max[0]);
          if (want_grid) out.grid.push_back(grid_err / static_cast<double>(rotations.size()) / ideal.max[0]);
        }
        if (want_l2) recon[a] = full_tomography(samples, J, s_values[a]);
        if (want_l2 && a == 0 && !compare) {
          SphericalFunction diff = recon[0] + (-1.0) * ideal.f[0];
          out.l2.push_back(l2_norm(diff) / ideal.norm[0]);
        }
      }

      if (compare) {
        std::array<std::array<double, 3>, 3> point{}, l2{};
        const PhasePoint north(0.0, 0.0);
        for (std::size_t src = 0; src < 3; ++src)
          for (std::size_t dst = 0; dst < 3; ++dst) {
            const double s_prime = s_values[dst] - s_values[src] + 1.0;
            const SphericalFunction conv = src == dst ? recon[src] : transform_s(recon[src], s_prime);
            const SphericalFunction diff = conv + (-1.0) * ideal.f[dst];
            point[src][dst] = evaluate_series(diff, north) / ideal.max[dst];
            l2[src][dst] = l2_norm(diff) / ideal.norm[dst];
          }
        out.cmp_point.push_back(point);
        out.cmp_l2.push_back(l2);
      }
    }
  });

  EnsembleErrorReport report;
  report.config = config;
  std::vector<double> finite_nr, point_sigma, grid_sigma, l2_mean;
  for (std::size_t r = 0; r < n_reps; ++r) {
    RepetitionResult res;
    res.n_r = config.n_r[r];
    if (compare) {
      ComparisonBlock block;
      for (const auto& st : per_state)
        for (int a = 0; a < 3; ++a)
          for (int b = 0; b < 3; ++b) {
            block.pointwise[a][b].push_back(st.cmp_point[r][a][b]);
            block.l2[a][b].push_back(st.cmp_l2[r][a][b]);
          }
      res.comparison = std::move(block);
    } else {
      for (const auto& st : per_state) {
        res.pointwise.push_back(st.pointwise[r]);
        if (want_grid) res.grid_average.push_back(st.grid[r]);
        if (want_l2) res.l2.push_back(st.l2[r]);
      }
      res.pointwise_fit = stats::fit_gaussian(res.pointwise);
      res.pointwise_skewness = stats::skewness(res.pointwise);
      if (want_grid) res.grid_fit = stats::fit_gaussian(res.grid_average);
      if (want_l2) {
        res.l2_fit = stats::fit_lognormal(res.l2);
        res.l2_mean = stats::mean(res.l2);
      }
      if (res.n_r > 0) {
        finite_nr.push_back(static_cast<double>(res.n_r));
        point_sigma.push_back(res.pointwise_fit.sigma);
        grid_sigma.push_back(res.grid_fit.sigma);
        l2_mean.push_back(res.l2_mean);
      }
    }
    report.results.push_back(std::move(res));
  }
  if (finite_nr.size() >= 2) {
    report.pointwise_sigma_exponent = stats::loglog_slope(finite_nr, point_sigma);
    if (want_grid) report.grid_sigma_exponent = stats::loglog_slope(finite_nr, grid_sigma);
    if (want_l2) report.l2_mean_exponent = stats::loglog_slope(finite_nr, l2_mean);
  }
  return report;
}

}  // namespace spinps
