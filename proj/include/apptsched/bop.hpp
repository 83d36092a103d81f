#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "apptsched/analytics.hpp"
#include "apptsched/errors.hpp"
#include "apptsched/estimate.hpp"
#include "apptsched/parallel.hpp"
#include "apptsched/piecewise.hpp"
#include "apptsched/rng.hpp"

namespace apptsched {

// Values on the uniform grid 0, dt, 2 dt, ..., (size-1) dt.
struct GridPath {
  double dt = 1.0;
  std::vector<double> values;

  double horizon() const { return dt * static_cast<double>(values.size() - 1); }
};

// Number of grid points for [0, H] at step dt: floor(H/dt) + 1, with H/dt
// snapped to the nearest integer when it is one up to rounding.
inline std::size_t grid_points(double horizon, double dt) {
  if (!(dt > 0.0)) throw DomainError("grid step must be positive");
  const double steps = horizon / dt;
  const double snapped = std::round(steps);
  const double whole = std::abs(steps - snapped) <= 1e-9 * std::max(1.0, steps) ? snapped : std::floor(steps);
  return static_cast<std::size_t>(whole) + 1;
}

// Discrete Skorohod map. Returns (Gamma_1 x, Gamma_2 x) with
// Gamma_2 x(t) = max_{s <= t} (-x(s))^+ over grid points, Gamma_1 = x + Gamma_2.
inline std::pair<GridPath, GridPath> skorohod_map(const GridPath& path) {
  GridPath reflected{path.dt, std::vector<double>(path.values.size())};
  GridPath pushing{path.dt, std::vector<double>(path.values.size())};
  double push = 0.0;
  for (std::size_t j = 0; j < path.values.size(); ++j) {
    const double x = path.values[j];
    if (-x > push) push = -x;
    pushing.values[j] = push;
    reflected.values[j] = x + push;
  }
  return {std::move(reflected), std::move(pushing)};
}

// Brownian motion with zero drift and diffusion coefficient sigma on the grid.
inline GridPath sample_bm(double sigma, double horizon, double dt, Philox4x64& rng) {
  const std::size_t count = grid_points(horizon, dt);
  GridPath path{dt, std::vector<double>(count, 0.0)};
  if (sigma == 0.0) return path;
  std::normal_distribution<double> gauss(0.0, sigma * std::sqrt(dt));
  double x = 0.0;
  for (std::size_t j = 1; j < count; ++j) {
    x += gauss(rng);
    path.values[j] = x;
  }
  return path;
}

// Right-continuous piecewise-linear control U on [0, H]; jumps are encoded as
// knot pairs with equal time (see PiecewiseLinear).
class PiecewiseLinearControl {
 public:
  PiecewiseLinearControl() = default;
  PiecewiseLinearControl(std::vector<Knot> knots, double horizon) : fn_(std::move(knots)), horizon_(horizon) {
    if (fn_.start() != 0.0) throw DomainError("control must start at t = 0");
    if (fn_.end() > horizon_) throw DomainError("control knots extend past H");
  }

  // U(t) = beta t.
  static PiecewiseLinearControl linear(double beta, double horizon) {
    return PiecewiseLinearControl({{0.0, 0.0}, {horizon, beta * horizon}}, horizon);
  }

  const PiecewiseLinear& function() const { return fn_; }
  double horizon() const { return horizon_; }

  // Grid values. A jump strictly inside a cell (t_j, t_{j+1}) is applied at
  // t_j; a jump at H is included in the last value.
  std::vector<double> on_grid(double dt, std::size_t count) const {
    std::vector<double> out(count);
    const auto& knots = fn_.knots();
    for (std::size_t j = 0; j < count; ++j) {
      const double t = dt * static_cast<double>(j);
      double value = fn_(t);
      if (j + 1 < count) {
        const double next = dt * static_cast<double>(j + 1);
        for (std::size_t k = 0; k + 1 < knots.size(); ++k) {
          if (knots[k].time == knots[k + 1].time && knots[k].time > t && knots[k].time < next) {
            value += knots[k + 1].value - knots[k].value;
          }
        }
      }
      out[j] = value;
    }
    return out;
  }

 private:
  PiecewiseLinear fn_;
  double horizon_ = 0.0;
};

// One replication of the BOP cost for control U on the grid:
//   (c_w/H) trapezoid(Q) + (c~_o/H) L(H),  Q = Gamma_1[U + X], L = Q - U - X.
inline double bop_path_cost(const std::vector<double>& control, const GridPath& noise, double horizon,
                            const BopCoefficients& c) {
  const std::size_t count = noise.values.size();
  double push = 0.0;
  double area = 0.0;
  double prev_q = 0.0;
  double q = 0.0;
  for (std::size_t j = 0; j < count; ++j) {
    const double x = control[j] + noise.values[j];
    if (-x > push) push = -x;
    q = x + push;
    if (j > 0) area += 0.5 * (prev_q + q) * noise.dt;
    prev_q = q;
  }
  return (c.cw * area + c.tilde_co * push) / horizon;
}

// Monte-Carlo BOP cost; replication k draws its Brownian path from
// substream k of `seed`. Discrete reflection biases Q low by O(sqrt(dt)).
inline Estimate bop_cost_mc(const PiecewiseLinearControl& control, const BopCoefficients& c, double horizon,
                            double dt, std::int64_t reps, std::uint64_t seed, unsigned threads = 0) {
  if (!(dt < horizon)) throw DomainError("bop grid step must be smaller than H");
  if (reps < 2) throw DomainError("bop_cost_mc needs reps >= 2");
  const std::size_t count = grid_points(horizon, dt);
  const std::vector<double> grid_control = control.on_grid(dt, count);
  const RngPolicy policy{seed};
  const std::vector<double> costs = run_indexed(
      reps, threads, [] { return 0; },
      [&](std::int64_t k, int&) {
        Philox4x64 rng = policy.substream(static_cast<std::uint64_t>(k));
        const GridPath noise = sample_bm(c.sigma, horizon, dt, rng);
        return bop_path_cost(grid_control, noise, horizon, c);
      });
  return summarize(costs);
}

inline Estimate bop_cost_mc(const PiecewiseLinearControl& control, const ModelParams& params, double horizon,
                            double dt, std::int64_t reps, std::uint64_t seed, unsigned threads = 0) {
  return bop_cost_mc(control, bop_coefficients(params), horizon, dt, reps, seed, threads);
}

// Grid values of Gamma_1[beta e + X] with the continuous-time reflection: the
// pushing term uses the exact minimum of the Brownian bridge over each cell,
// so the values have the law of the reflected diffusion at the grid times.
inline GridPath reflect_drifted_bm_exact(double beta, double sigma, double horizon, double dt, Philox4x64& rng) {
  const std::size_t count = grid_points(horizon, dt);
  GridPath q{dt, std::vector<double>(count, 0.0)};
  std::normal_distribution<double> gauss(0.0, sigma * std::sqrt(dt));
  const double bridge_scale = 2.0 * sigma * sigma * dt;
  double x = 0.0;
  double running_min = 0.0;
  for (std::size_t j = 1; j < count; ++j) {
    const double next = x + beta * dt + gauss(rng);
    const double jump = next - x;
    const double u = 1.0 - uniform01(rng);  // (0, 1]
    const double bridge_min = 0.5 * (x + next - std::sqrt(jump * jump - bridge_scale * std::log(u)));
    if (bridge_min < running_min) running_min = bridge_min;
    x = next;
    q.values[j] = x - running_min;
  }
  return q;
}

}  // namespace apptsched
