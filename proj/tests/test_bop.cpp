#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "apptsched/bop.hpp"
#include "oracles.hpp"
#include "test_support.hpp"

using namespace apptsched;

namespace {

GridPath grid(double dt, std::size_t count, double (*f)(double)) {
  GridPath g{dt, std::vector<double>(count)};
  for (std::size_t j = 0; j < count; ++j) g.values[j] = f(dt * static_cast<double>(j));
  return g;
}

}  // namespace

TEST(Skorohod, PureDrain) {
  const auto [q, l] = skorohod_map(grid(0.01, 101, [](double t) { return -t; }));
  for (std::size_t j = 0; j < q.values.size(); ++j) {
    EXPECT_EQ(q.values[j], 0.0);
    EXPECT_NEAR(l.values[j], 0.01 * static_cast<double>(j), 1e-15);
  }
}

TEST(Skorohod, NonNegativeInputPassesThrough) {
  const GridPath x = grid(0.01, 101, [](double t) { return std::sin(3.0 * t) * std::sin(3.0 * t); });
  const auto [q, l] = skorohod_map(x);
  EXPECT_EQ(q.values, x.values);
  for (double v : l.values) EXPECT_EQ(v, 0.0);
}

TEST(Skorohod, DownThenUp) {
  const auto [q, l] = skorohod_map(grid(0.25, 9, [](double t) { return t <= 1.0 ? -t : t - 2.0; }));
  EXPECT_EQ(l.values.back(), 1.0);
  EXPECT_EQ(q.values.back(), 1.0);
  EXPECT_EQ(l.values.front(), 0.0);
}

TEST(Skorohod, ComplementarityAndLipschitzOnRandomPaths) {
  for (std::uint64_t k = 0; k < 1000; ++k) {
    auto rng = RngPolicy{4}.substream(k);
    const GridPath x = sample_bm(1.3, 1.0, 1.0 / 256, rng);
    GridPath y = sample_bm(0.2, 1.0, 1.0 / 256, rng);
    double sup_diff = 0.0;
    for (std::size_t j = 0; j < y.values.size(); ++j) {
      y.values[j] += x.values[j] - 0.3 * static_cast<double>(j) / 256.0;
      sup_diff = std::max(sup_diff, std::abs(x.values[j] - y.values[j]));
    }
    const auto [qx, lx] = skorohod_map(x);
    const auto [qy, ly] = skorohod_map(y);
    double sup_q = 0.0;
    for (std::size_t j = 0; j < x.values.size(); ++j) {
      ASSERT_GE(qx.values[j], 0.0);
      sup_q = std::max(sup_q, std::abs(qx.values[j] - qy.values[j]));
      if (j > 0) {
        ASSERT_GE(lx.values[j], lx.values[j - 1]);
        if (lx.values[j] > lx.values[j - 1]) {
          ASSERT_EQ(qx.values[j], 0.0);
        }
      }
    }
    EXPECT_LE(sup_q, 2.0 * sup_diff + 1e-15);
  }
}

TEST(SampleBm, ZeroNoise) {
  auto rng = RngPolicy{1}.substream(0);
  for (double v : sample_bm(0.0, 1.0, 0.1, rng).values) EXPECT_EQ(v, 0.0);
}

TEST(SampleBm, VarianceAndIndependentIncrements) {
  constexpr int kPaths = 100000;
  const double sigma = 1.4;
  long double s_end = 0, s_end2 = 0, s_a = 0, s_b = 0, s_ab = 0, s_a2 = 0, s_b2 = 0;
  for (int k = 0; k < kPaths; ++k) {
    auto rng = RngPolicy{8}.substream(static_cast<std::uint64_t>(k));
    const GridPath x = sample_bm(sigma, 2.0, 0.05, rng);
    ASSERT_EQ(x.values.size(), 41u);
    EXPECT_EQ(x.values.front(), 0.0);
    const double end = x.values.back();
    const double a = x.values[20];
    const double b = end - a;
    s_end += end;
    s_end2 += static_cast<long double>(end) * end;
    s_a += a;
    s_b += b;
    s_a2 += static_cast<long double>(a) * a;
    s_b2 += static_cast<long double>(b) * b;
    s_ab += static_cast<long double>(a) * b;
  }
  const double var = static_cast<double>(s_end2 / kPaths - (s_end / kPaths) * (s_end / kPaths));
  EXPECT_NEAR(var, sigma * sigma * 2.0, 0.03 * sigma * sigma * 2.0);
  const long double ma = s_a / kPaths, mb = s_b / kPaths;
  const double cov = static_cast<double>(s_ab / kPaths - ma * mb);
  const double rho = cov / std::sqrt(static_cast<double>((s_a2 / kPaths - ma * ma) * (s_b2 / kPaths - mb * mb)));
  EXPECT_LT(std::abs(rho), 0.01);
}

TEST(ReflectedMean, ExactReflectionMatchesFoldedNormal) {
  constexpr int kPaths = 100000;
  const double sigma = 1.2;
  const double dt = 0.05;
  const std::size_t marks[] = {5, 10, 20};  // t = 0.25, 0.5, 1
  std::vector<long double> sum(3, 0), sum2(3, 0);
  for (int k = 0; k < kPaths; ++k) {
    auto rng = RngPolicy{12}.substream(static_cast<std::uint64_t>(k));
    const GridPath q = reflect_drifted_bm_exact(0.0, sigma, 1.0, dt, rng);
    for (int m = 0; m < 3; ++m) {
      const double v = q.values[marks[m]];
      sum[m] += v;
      sum2[m] += static_cast<long double>(v) * v;
    }
  }
  for (int m = 0; m < 3; ++m) {
    const double t = dt * static_cast<double>(marks[m]);
    const double mean = static_cast<double>(sum[m] / kPaths);
    const double se = std::sqrt(static_cast<double>(sum2[m] / kPaths) - mean * mean) / std::sqrt(kPaths * 1.0);
    EXPECT_NEAR(mean, sigma * std::sqrt(2.0 * t / std::numbers::pi), 3.0 * se) << t;
  }
}

TEST(ReflectedMean, DiscreteReflectionBiasIsOrderSqrtDt) {
  constexpr int kPaths = 20000;
  const double sigma = 1.2;
  const double dt = 1.0 / 4096;
  long double sum = 0, sum2 = 0;
  for (int k = 0; k < kPaths; ++k) {
    auto rng = RngPolicy{13}.substream(static_cast<std::uint64_t>(k));
    const auto [q, l] = skorohod_map(sample_bm(sigma, 1.0, dt, rng));
    sum += q.values.back();
    sum2 += static_cast<long double>(q.values.back()) * q.values.back();
  }
  const double mean = static_cast<double>(sum / kPaths);
  const double se = std::sqrt(static_cast<double>(sum2 / kPaths) - mean * mean) / std::sqrt(kPaths * 1.0);
  const double exact = sigma * std::sqrt(2.0 / std::numbers::pi);
  EXPECT_LT(mean, exact + 3.0 * se);
  EXPECT_GT(mean, exact - 0.6 * sigma * std::sqrt(dt) - 3.0 * se);
}

TEST(PiecewiseLinearControl, JumpsApplyAtCellLeftEndpoint) {
  const PiecewiseLinearControl u({{0.0, 0.0}, {0.3, 0.0}, {0.3, 1.0}, {1.0, 1.0}, {1.0, 2.0}}, 1.0);
  const std::vector<double> g = u.on_grid(0.25, 5);
  EXPECT_EQ(g, (std::vector<double>{0.0, 1.0, 1.0, 1.0, 2.0}));
  const std::vector<double> lin = PiecewiseLinearControl::linear(-0.5, 1.0).on_grid(0.25, 5);
  EXPECT_EQ(lin, (std::vector<double>{0.0, -0.125, -0.25, -0.375, -0.5}));
}

TEST(BopCostMc, ZeroControlMatchesFoldedNormalCost) {
  const Estimate e =
      bop_cost_mc(PiecewiseLinearControl::linear(0.0, 1.0), support::p0(), 1.0, 1.0 / 16384, 20000, 2024);
  EXPECT_NEAR(e.mean, oracle::kP0BopZeroH1, 0.03 * oracle::kP0BopZeroH1 + 3.0 * e.std_error);
  EXPECT_EQ(e.reps, 20000);
}

TEST(BopCostMc, OptimalDriftMatchesQuadrature) {
  const Estimate e = bop_cost_mc(PiecewiseLinearControl::linear(oracle::kP0BetaStar, 1.0), support::p0(), 1.0,
                                 1.0 / 16384, 20000, 2025);
  EXPECT_NEAR(e.mean, oracle::kP0BopBetaStarH1, 0.03 * oracle::kP0BopBetaStarH1 + 3.0 * e.std_error);
}

TEST(BopCostMc, NoiselessIsExact) {
  BopCoefficients c = bop_coefficients(support::p0());
  c.sigma = 0.0;
  const Estimate e = bop_cost_mc(PiecewiseLinearControl::linear(-0.5, 1.0), c, 1.0, 1.0 / 1024, 10, 1);
  EXPECT_EQ(e.mean, 0.5 * c.tilde_co);
  EXPECT_EQ(e.std_error, 0.0);
}

TEST(BopCostMc, RejectsBadArguments) {
  const auto u = PiecewiseLinearControl::linear(-0.5, 1.0);
  EXPECT_THROW(bop_cost_mc(u, support::p0(), 1.0, 1.0, 10, 1), DomainError);
  EXPECT_THROW(bop_cost_mc(u, support::p0(), 1.0, 0.01, 1, 1), DomainError);
  ModelParams under = support::p0();
  under.alpha = 1.0;
  EXPECT_THROW(bop_cost_mc(u, under, 1.0, 0.01, 10, 1), NotOverloaded);
}

TEST(BopCostMc, ThreadCountDoesNotChangeResult) {
  const auto u = PiecewiseLinearControl::linear(-0.3, 2.0);
  const Estimate a = bop_cost_mc(u, support::p0(), 2.0, 1.0 / 512, 500, 7, 1);
  const Estimate b = bop_cost_mc(u, support::p0(), 2.0, 1.0 / 512, 500, 7, 4);
  EXPECT_EQ(a.mean, b.mean);
  EXPECT_EQ(a.std_error, b.std_error);
}
