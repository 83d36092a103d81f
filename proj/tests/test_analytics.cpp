#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "apptsched/analytics.hpp"
#include "oracles.hpp"
#include "test_support.hpp"

using namespace apptsched;

TEST(FluidSummary, ReferenceValues) {
  const FluidSummary fs = fluid_summary(support::p0());
  EXPECT_DOUBLE_EQ(fs.tau_bar, 1.6);
  EXPECT_NEAR(fs.v_bar, 0.78, 1e-15);

  ModelParams prm = support::p0();
  prm.alpha = 3.0;
  prm.p = 0.5;
  prm.cw = 2.0;
  EXPECT_NEAR(fluid_summary(prm).v_bar, 0.75, 1e-15);
}

TEST(FluidSummary, VanishesAtCriticalLoad) {
  ModelParams prm = support::p0();
  prm.alpha = 1.25 + 1e-9;  // p alpha -> mu H from above
  EXPECT_LT(fluid_summary(prm).v_bar, 1e-8);
  prm.alpha = 1.0;
  EXPECT_THROW(fluid_summary(prm), NotOverloaded);
}

TEST(FopCost, HandComputedControls) {
  const ModelParams prm = support::p0();
  EXPECT_NEAR(fop_cost(prm, fluid_optimal_control(prm)), 0.78, 1e-12);
  EXPECT_NEAR(fop_cost(prm, CumulativeControl({{0.0, 0.0}, {1.0, 2.0}}, 1.0)), 1.08, 1e-12);
  EXPECT_NEAR(fop_cost(prm, CumulativeControl({{0.0, 0.0}, {0.0, 2.0}, {1.0, 2.0}}, 1.0)), 1.88, 1e-12);
  EXPECT_THROW(fop_cost(prm, CumulativeControl({{0.0, 0.0}, {1.0, 1.5}}, 1.0)), MassMismatch);
}

namespace {

CumulativeControl perturbed_control(const ModelParams& prm, Philox4x64& rng) {
  const double h = prm.horizon;
  const int pieces = 2 + static_cast<int>(uniform01(rng) * 8);
  std::vector<double> times;
  for (int j = 0; j < pieces; ++j) times.push_back(h * uniform01(rng));
  std::sort(times.begin(), times.end());
  std::vector<Knot> knots{{0.0, 0.0}};
  double level = 0.0;
  for (double t : times) {
    if (t <= knots.back().time) continue;
    const double target = prm.mu * t / prm.p * (1.0 + 0.6 * (uniform01(rng) - 0.5));
    level = std::clamp(target, level, prm.alpha);
    knots.push_back({t, level});
  }
  knots.push_back({h, level});
  knots.push_back({h, prm.alpha});
  return CumulativeControl(std::move(knots), h);
}

}  // namespace

TEST(FopCost, MatchesEulerOracle) {
  const ModelParams prm = support::p0();
  for (std::uint64_t k = 0; k < 10; ++k) {
    auto rng = RngPolicy{17}.substream(k);
    const CumulativeControl u = perturbed_control(prm, rng);
    const double euler = oracle::fluid_cost_euler([&](double t) { return u(t); }, prm.p, prm.mu, prm.horizon, prm.cw,
                                                  prm.co, 1e-5);
    EXPECT_NEAR(fop_cost(prm, u), euler, 1e-4) << k;
  }
}

TEST(FopCost, FluidControlIsOptimal) {
  const ModelParams prm = support::p0();
  const double v_bar = fluid_summary(prm).v_bar;
  for (std::uint64_t k = 0; k < 200; ++k) {
    auto rng = RngPolicy{18}.substream(k);
    EXPECT_GE(fop_cost(prm, perturbed_control(prm, rng)), v_bar - 1e-9) << k;
  }
}

TEST(DiffusionConstants, ReferenceValues) {
  const DiffusionConstants dc = diffusion_constants(support::p0());
  EXPECT_NEAR(dc.sigma, oracle::kP0Sigma, 1e-15);
  EXPECT_NEAR(dc.tilde_co, 1.6, 1e-15);
  EXPECT_NEAR(dc.beta_star, oracle::kP0BetaStar, 1e-15);
  EXPECT_NEAR(dc.v_star, oracle::kP0VStar, 1e-15);
  EXPECT_NEAR(dc.c_star_legacy, std::sqrt(1.16 / 3.2), 1e-15);
  EXPECT_NEAR(dc.c_star_legacy, 0.602080, 1e-6);
}

TEST(DiffusionConstants, CostHomogeneity) {
  ModelParams prm = support::p0();
  const DiffusionConstants base = diffusion_constants(prm);
  prm.cw *= 3.0;
  prm.co *= 3.0;
  const DiffusionConstants scaled = diffusion_constants(prm);
  EXPECT_NEAR(scaled.beta_star, base.beta_star, 1e-15);
  EXPECT_NEAR(scaled.v_star, 3.0 * base.v_star, 1e-14);
}

TEST(DiffusionConstants, DegenerateNoise) {
  ModelParams prm = support::p0();
  prm.p = 1.0;
  prm.cs2 = 0.0;
  prm.service_law = ServiceLaw::Deterministic;
  EXPECT_THROW(diffusion_constants(prm), DegenerateNoise);
}

TEST(RbmCdf, Examples) {
  for (double t : {0.1, 1.0, 50.0}) EXPECT_EQ(rbm_cdf(t, 0.0, -0.5, 1.2), 0.0);
  EXPECT_NEAR(rbm_cdf(1.0, 1.0, 0.0, 1.0), 2.0 * oracle::Phi(1.0) - 1.0, 1e-15);
  EXPECT_NEAR(rbm_cdf(1.0, 1.0, 0.0, 1.0), 0.682689, 1e-6);
  EXPECT_NEAR(rbm_cdf(3.0, 1e3, 0.4, 1.0), 1.0, 1e-15);
  EXPECT_NEAR(rbm_cdf(3.0, 50.0, -0.4, 1.0), 1.0, 1e-15);
}

TEST(RbmCdf, NonIncreasingInTimeForNegativeDrift) {
  for (double y : {0.05, 0.3, 1.0, 2.5, 6.0}) {
    double prev = 1.0;
    for (double t = 0.05; t < 60.0; t *= 1.3) {
      const double f = rbm_cdf(t, y, -0.6, 1.1);
      EXPECT_LE(f, prev + 1e-14) << y << ' ' << t;
      prev = f;
    }
  }
}

TEST(RbmCdf, TailIsComplement) {
  for (double beta : {-2.0, -0.3, 0.0, 0.7}) {
    for (double y : {0.0, 0.4, 3.0, 20.0}) {
      EXPECT_NEAR(rbm_cdf(2.0, y, beta, 0.9) + rbm_tail(2.0, y, beta, 0.9), 1.0, 1e-14);
    }
  }
}

TEST(RbmMean, MatchesClosedForm) {
  EXPECT_NEAR(rbm_mean(1.0, 0.0, 1.0), std::sqrt(2.0 / std::numbers::pi), 1e-8);
  for (double beta : {-3.0, -1.0, -0.612372, -0.1, 0.0, 0.2, 1.5}) {
    for (double t : {0.01, 0.5, 1.0, 7.0, 120.0}) {
      const double ref = oracle::rbm_mean_closed(t, beta, 1.095445);
      EXPECT_NEAR(rbm_mean(t, beta, 1.095445), ref, 2e-8 * std::max(1.0, ref)) << beta << ' ' << t;
    }
  }
}

TEST(RbmMean, LongRunLimitAndDegenerateNoise) {
  EXPECT_NEAR(rbm_mean(200.0, -1.0, std::sqrt(2.0)), 1.0, 1e-4);
  EXPECT_LT(rbm_mean(5.0, -1.0, 1e-6), 1e-6);
}

TEST(RbmMean, NonDecreasingInDrift) {
  for (double t : {0.3, 2.0, 30.0}) {
    double prev = 0.0;
    for (double beta = -3.0; beta <= 1.0; beta += 0.125) {
      const double m = rbm_mean(t, beta, 0.8);
      EXPECT_GE(m, prev - 1e-8) << t << ' ' << beta;
      prev = m;
    }
  }
}

TEST(RbmStationaryMean, Examples) {
  EXPECT_DOUBLE_EQ(rbm_stationary_mean(-1.0, std::sqrt(2.0)), 1.0);
  EXPECT_NEAR(rbm_stationary_mean(-0.612372, 1.095445), 0.979796, 1e-6);
  EXPECT_DOUBLE_EQ(rbm_stationary_mean(-0.7, 2.4), 4.0 * rbm_stationary_mean(-0.7, 1.2));
  EXPECT_THROW(rbm_stationary_mean(0.0, 1.0), DomainError);
}

TEST(DriftTradeoff, Values) {
  const ModelParams prm = support::p0();
  EXPECT_NEAR(drift_tradeoff(oracle::kP0BetaStar, prm), oracle::kP0VStar, 1e-14);
  EXPECT_NEAR(drift_tradeoff(-1.0, prm), 2.2, 1e-14);
  EXPECT_GT(drift_tradeoff(-1e-9, prm), 1e8);
}

TEST(DriftTradeoff, GridArgminAndBalancedTerms) {
  const ModelParams prm = support::p0();
  const DiffusionConstants dc = diffusion_constants(prm);
  const double step = 0.005 * dc.sigma;
  double best_beta = 0.0;
  double best = oracle::kInf;
  for (int j = 0;; ++j) {
    const double beta = -3.0 * dc.sigma + j * step;
    if (beta > -0.01 * dc.sigma + 1e-12) break;
    const double v = drift_tradeoff(beta, prm);
    if (v < best) {
      best = v;
      best_beta = beta;
    }
  }
  EXPECT_LE(std::abs(best_beta - dc.beta_star), step);
  EXPECT_LE(std::abs(best - dc.v_star), 1e-3 * dc.v_star);
  const double waiting = prm.cw * dc.sigma * dc.sigma / (2.0 * -dc.beta_star);
  const double idling = dc.tilde_co * -dc.beta_star;
  EXPECT_NEAR(waiting, idling, 1e-12);
}

TEST(LinearBopCost, ReferenceValues) {
  const ModelParams prm = support::p0();
  EXPECT_NEAR(linear_bop_cost(0.0, 1.0, prm), oracle::kP0BopZeroH1, 1e-6);
  // The same value from E|X_t| = sigma sqrt(2t/pi) directly.
  const double s = oracle::kP0Sigma * std::sqrt(2.0 / std::numbers::pi);
  EXPECT_NEAR(linear_bop_cost(0.0, 1.0, prm), s * 2.0 / 3.0 + 1.6 * s, 1e-6);
  EXPECT_NEAR(linear_bop_cost(oracle::kP0BetaStar, 1.0, prm), oracle::kP0BopBetaStarH1, 1e-6);
  EXPECT_NEAR(linear_bop_cost(oracle::kP0BetaStar, 10.0, prm), oracle::kP0BopBetaStarH10, 1e-6);
  EXPECT_NEAR(linear_bop_cost(oracle::kP0BetaStar, 50.0, prm), oracle::kP0BopBetaStarH50, 1e-6);
  EXPECT_NEAR(linear_bop_cost(oracle::kP0BetaStar, 200.0, prm), oracle::kP0BopBetaStarH200, 1e-6);
}

TEST(LinearBopCost, DecreasesTowardLongRunValue) {
  const ModelParams prm = support::p0();
  double prev = oracle::kInf;
  for (double h : {1.0, 10.0, 50.0, 200.0}) {
    const double v = linear_bop_cost(oracle::kP0BetaStar, h, prm);
    EXPECT_LT(v, prev);
    EXPECT_GT(v, oracle::kP0VStar - 1e-6);
    prev = v;
  }
  EXPECT_LE(std::abs(prev - oracle::kP0VStar), 0.05 * oracle::kP0VStar);
}

TEST(LinearBopCost, NoiselessReflection) {
  BopCoefficients c = bop_coefficients(support::p0());
  c.sigma = 0.0;
  EXPECT_DOUBLE_EQ(linear_bop_cost(-0.5, 1.0, c), 0.5 * 1.6);
  EXPECT_DOUBLE_EQ(linear_bop_cost(-0.5, 7.0, c), 0.5 * 1.6);
}
