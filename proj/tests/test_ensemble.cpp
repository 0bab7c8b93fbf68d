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

#include "spinps/ensemble.hpp"

namespace {

using namespace spinps;

TEST(Stats, MomentsOfKnownSample) {
  const std::vector<double> x = {1, 2, 3, 4, 10};
  EXPECT_DOUBLE_EQ(stats::mean(x), 4.0);
  EXPECT_NEAR(stats::stddev(x), std::sqrt(50.0 / 4.0), 1e-14);
  // m2 = 10, m3 = (-27 - 8 - 1 + 0 + 216) / 5 = 36
  EXPECT_NEAR(stats::skewness(x), 36.0 / std::pow(10.0, 1.5), 1e-14);
  EXPECT_NEAR(stats::skewness({-1, 0, 1}), 0.0, 1e-15);
}

TEST(Stats, LogLogSlopeOfPowerLaw) {
  const std::vector<double> x = {100, 1000, 10000};
  std::vector<double> y;
  for (double v : x) y.push_back(3.0 * std::pow(v, -0.5));
  EXPECT_NEAR(stats::loglog_slope(x, y), -0.5, 1e-14);
  EXPECT_THROW(stats::loglog_slope({1.0}, {1.0}), DomainError);
}

TEST(Stats, LogNormalFitRecoversParameters) {
  Stream rng = make_stream(5);
  std::lognormal_distribution<double> dist(-2.0, 0.3);
  std::vector<double> x(20000);
  for (double& v : x) v = dist(rng);
  const auto fit = stats::fit_lognormal(x);
  EXPECT_TRUE(fit.positive_support);
  EXPECT_NEAR(fit.mu, -2.0, 0.01);
  EXPECT_NEAR(fit.sigma, 0.3, 0.01);
  EXPECT_FALSE(stats::fit_lognormal({1.0, -1.0, 2.0}).positive_support);
}

TEST(Stats, BootstrapRatioBracketsTruth) {
  Stream rng = make_stream(6);
  std::normal_distribution<double> g;
  std::vector<double> a(400), b(400);
  for (std::size_t i = 0; i < a.size(); ++i) {
    b[i] = g(rng);
    a[i] = 2.0 * g(rng);
  }
  const double lo = stats::bootstrap_sigma_ratio_quantile(a, b, 1000, 1, 0.025);
  const double hi = stats::bootstrap_sigma_ratio_quantile(a, b, 1000, 1, 0.975);
  EXPECT_LT(lo, 2.0);
  EXPECT_GT(hi, 2.0);
  EXPECT_GT(lo, 1.5);
  EXPECT_EQ(lo, stats::bootstrap_sigma_ratio_quantile(a, b, 1000, 1, 0.025));
}

TEST(Config, ValidationAndModes) {
  ExperimentConfig c;
  c.validate();
  EXPECT_EQ(c.n_rho, 2200);
  c.n_p = 21;
  EXPECT_THROW(c.validate(), DomainError);
  c.n_p = 10;
  EXPECT_THROW(c.validate(), DomainError);  // 4J+2 = 12 for J = 5/2
  c.n_p = 12;
  c.n_r = {-1};
  EXPECT_THROW(c.validate(), DomainError);
  EXPECT_EQ(parse_mode("compare3x3"), ExperimentMode::kCompare3x3);
  EXPECT_EQ(mode_name(ExperimentMode::kGrid), "grid");
  EXPECT_THROW(parse_mode("bogus"), DomainError);
}

ExperimentConfig small_config(ExperimentMode mode) {
  ExperimentConfig c;
  c.twice_J = 3;
  c.n_rho = 12;
  c.n_r = {0, 200, 2000};
  c.n_p = 8;
  c.seed = 77;
  c.mode = mode;
  return c;
}

TEST(Ensemble, ExactModeIsNoiseless) {
  for (auto mode : {ExperimentMode::kFull, ExperimentMode::kCompare3x3}) {
    ExperimentConfig c = small_config(mode);
    c.n_r = {0};
    const auto r = run_ensemble_experiment(c);
    const auto& res = r.results.at(0);
    if (res.comparison) {
      for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b)
          for (std::size_t i = 0; i < res.comparison->l2[a][b].size(); ++i) {
            EXPECT_LE(std::abs(res.comparison->pointwise[a][b][i]), 1e-8);
            EXPECT_LE(res.comparison->l2[a][b][i], 1e-8);
          }
    } else {
      for (double v : res.pointwise) EXPECT_LE(std::abs(v), 1e-8);
      for (double v : res.grid_average) EXPECT_LE(std::abs(v), 1e-8);
      for (double v : res.l2) EXPECT_LE(v, 1e-8);
    }
  }
}

TEST(Ensemble, IndependentOfThreadCount) {
  ExperimentConfig c = small_config(ExperimentMode::kFull);
  c.threads = 1;
  const auto a = run_ensemble_experiment(c);
  c.threads = 4;
  const auto b = run_ensemble_experiment(c);
  ASSERT_EQ(a.results.size(), b.results.size());
  for (std::size_t i = 0; i < a.results.size(); ++i) {
    EXPECT_EQ(a.results[i].pointwise, b.results[i].pointwise);
    EXPECT_EQ(a.results[i].grid_average, b.results[i].grid_average);
    EXPECT_EQ(a.results[i].l2, b.results[i].l2);
  }
  EXPECT_EQ(a.l2_mean_exponent, b.l2_mean_exponent);
  c.seed = 78;
  EXPECT_NE(run_ensemble_experiment(c).results[1].pointwise, a.results[1].pointwise);
}

TEST(Ensemble, ModesFillTheRightFields) {
  const auto p = run_ensemble_experiment(small_config(ExperimentMode::kPointwise));
  EXPECT_FALSE(p.results[1].pointwise.empty());
  EXPECT_TRUE(p.results[1].grid_average.empty());
  EXPECT_TRUE(p.results[1].l2.empty());
  EXPECT_TRUE(p.pointwise_sigma_exponent.has_value());
  EXPECT_FALSE(p.l2_mean_exponent.has_value());
  const auto g = run_ensemble_experiment(small_config(ExperimentMode::kGrid));
  EXPECT_FALSE(g.results[1].grid_average.empty());
  EXPECT_TRUE(g.results[1].l2.empty());
  const auto c = run_ensemble_experiment(small_config(ExperimentMode::kCompare3x3));
  ASSERT_TRUE(c.results[1].comparison.has_value());
  EXPECT_EQ(c.results[1].comparison->pointwise[0][2].size(), 12u);
}

TEST(Ensemble, PureEnsembleAndErrorDefinitions) {
  ExperimentConfig c = small_config(ExperimentMode::kFull);
  c.ensemble = StateEnsemble::kHaarPure;
  c.n_r = {50};
  const auto r = run_ensemble_experiment(c);
  for (double v : r.results[0].l2) EXPECT_GT(v, 0.0);
  // Grid-averaged errors average out much of the pointwise noise.
  EXPECT_LT(r.results[0].grid_fit.sigma, r.results[0].pointwise_fit.sigma);
}

}  // namespace
