#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "apptsched/errors.hpp"
#include "apptsched/model.hpp"
#include "apptsched/numerics.hpp"
#include "apptsched/piecewise.hpp"

namespace apptsched {

namespace detail {

inline void require_overloaded(const ModelParams& params, const char* what) {
  if (!params.overloaded()) {
    throw NotOverloaded(std::string(what) + " requires p*alpha > mu*H");
  }
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Fluid scale
// ---------------------------------------------------------------------------

struct FluidSummary {
  double tau_bar = 0.0;
  double v_bar = 0.0;
  CumulativeControl lambda_star;
};

// Fluid-optimal control: lambda*(t) = mu t / p on [0, H), alpha from H on.
inline CumulativeControl fluid_optimal_control(const ModelParams& params) {
  const double h = params.horizon;
  return CumulativeControl({{0.0, 0.0}, {h, params.mu * h / params.p}, {h, params.alpha}}, h);
}

inline FluidSummary fluid_summary(const ModelParams& params) {
  detail::require_overloaded(params, "fluid_summary");
  FluidSummary out;
  out.tau_bar = params.tau_bar();
  const double excess = params.p * params.alpha - params.mu * params.horizon;
  out.v_bar = params.cw * excess * excess / (2.0 * params.mu) + params.co * (out.tau_bar - params.horizon);
  out.lambda_star = fluid_optimal_control(params);
  return out;
}

// Fluid cost of a control with mass alpha.
//
// q = Gamma_1(p*control - mu*e) is propagated exactly across the linear
// pieces and jumps; waiting is the time-integral of q, overage is the time
// the residual q(H) takes to drain at rate mu.
inline double fop_cost(const ModelParams& params, const CumulativeControl& control) {
  detail::require_overloaded(params, "fop_cost");
  if (control.horizon() != params.horizon) throw DomainError("control horizon differs from params.horizon");
  if (std::abs(control.mass() - params.alpha) > 1e-12 * std::max(1.0, params.alpha)) {
    throw MassMismatch("fluid control mass must equal alpha");
  }
  const double p = params.p;
  const double mu = params.mu;
  const auto& knots = control.knots();

  double q = p * knots.front().value;  // initial atom at t = 0
  double area = 0.0;
  for (std::size_t j = 0; j + 1 < knots.size(); ++j) {
    const Knot& a = knots[j];
    const Knot& b = knots[j + 1];
    const double inflow = p * (b.value - a.value);
    if (b.time == a.time) {
      q += inflow;
      continue;
    }
    const double dt = b.time - a.time;
    const double net = inflow / dt - mu;
    if (net >= 0.0 || q + net * dt >= 0.0) {
      area += q * dt + 0.5 * net * dt * dt;
      q += net * dt;
    } else {
      // Empties part-way through the piece and stays at zero (inflow < mu).
      area += 0.5 * q * (q / -net);
      q = 0.0;
    }
  }
  area += q * q / (2.0 * mu);
  const double overage = q / mu;
  return params.cw * area + params.co * overage;
}

// ---------------------------------------------------------------------------
// Diffusion scale
// ---------------------------------------------------------------------------

struct DiffusionConstants {
  double sigma = 0.0;
  double tilde_co = 0.0;
  double beta_star = 0.0;
  double v_star = 0.0;
  double c_star_legacy = 0.0;
};

// Coefficients of the Brownian control problem: noise level and the two cost
// weights. Kept separate from ModelParams so sigma can be overridden.
struct BopCoefficients {
  double sigma = 0.0;
  double cw = 0.0;
  double tilde_co = 0.0;
};

inline double diffusion_sigma(const ModelParams& params) {
  const double mu_tilde = params.mu / params.p;
  return std::sqrt(mu_tilde * params.p * (1.0 - params.p) + params.mu * params.cs2);
}

// Idle-time weight c_w (tau_bar - H) + c_o / mu.
inline double tilde_overage_cost(const ModelParams& params) {
  return params.cw * (params.tau_bar() - params.horizon) + params.co / params.mu;
}

inline BopCoefficients bop_coefficients(const ModelParams& params) {
  detail::require_overloaded(params, "bop_coefficients");
  return {diffusion_sigma(params), params.cw, tilde_overage_cost(params)};
}

inline DiffusionConstants diffusion_constants(const ModelParams& params) {
  detail::require_overloaded(params, "diffusion_constants");
  if (!(params.cw > 0.0)) throw DomainError("diffusion_constants requires cw > 0");
  DiffusionConstants dc;
  dc.sigma = diffusion_sigma(params);
  if (!(dc.sigma > 0.0)) throw DegenerateNoise("sigma = 0: p = 1 with deterministic service");
  dc.tilde_co = tilde_overage_cost(params);
  dc.beta_star = -dc.sigma * std::sqrt(params.cw / (2.0 * dc.tilde_co));
  dc.v_star = dc.sigma * std::sqrt(2.0 * params.cw * dc.tilde_co);
  // Legacy constant with the service-time variance cs2/mu^2 in place of sigma^2.
  const double service_var = params.cs2 / (params.mu * params.mu);
  const double mu3 = params.mu * params.mu * params.mu;
  dc.c_star_legacy =
      std::sqrt(params.cw * (params.p * (1.0 - params.p) + mu3 * service_var) / (2.0 * dc.tilde_co));
  return dc;
}

// ---------------------------------------------------------------------------
// Reflected Brownian motion started at 0: Q_t = Gamma_1(beta e + sigma B)(t)
// ---------------------------------------------------------------------------

namespace detail {

inline void check_rbm_args(double t, double sigma) {
  if (!(t > 0.0)) throw DomainError("RBM time must be positive");
  if (!(sigma > 0.0)) throw DomainError("RBM sigma must be positive");
}

// e^{2 beta y / sigma^2} Phi(b), evaluated without overflow: when b < 0 it is
// rewritten as phi(a) * Mills(-b) using e^{2 beta y / sigma^2} phi(b) = phi(a).
inline double rbm_reflection_term(double a, double b, double y, double beta, double sigma) {
  if (b >= 0.0) return std::exp(2.0 * beta * y / (sigma * sigma)) * numerics::normal_cdf(b);
  return numerics::normal_pdf(a) * numerics::mills_ratio(-b);
}

}  // namespace detail

// P(Q_t <= y).
inline double rbm_cdf(double t, double y, double beta, double sigma) {
  detail::check_rbm_args(t, sigma);
  if (y < 0.0) return 0.0;
  const double s = sigma * std::sqrt(t);
  const double a = (y - beta * t) / s;
  const double b = (-y - beta * t) / s;
  const double value = numerics::normal_cdf(a) - detail::rbm_reflection_term(a, b, y, beta, sigma);
  return std::clamp(value, 0.0, 1.0);
}

// P(Q_t > y), computed directly so the upper tail keeps relative accuracy.
inline double rbm_tail(double t, double y, double beta, double sigma) {
  detail::check_rbm_args(t, sigma);
  if (y < 0.0) return 1.0;
  const double s = sigma * std::sqrt(t);
  const double a = (y - beta * t) / s;
  const double b = (-y - beta * t) / s;
  const double value = numerics::normal_sf(a) + detail::rbm_reflection_term(a, b, y, beta, sigma);
  return std::clamp(value, 0.0, 1.0);
}

// Upper bound on the integral of P(Q_t > y) over [y0, inf).
inline double rbm_tail_integral_bound(double t, double y0, double beta, double sigma) {
  const double s = sigma * std::sqrt(t);
  const double a = (y0 - beta * t) / s;
  const double gauss = s * numerics::normal_pdf(a);
  if (beta < 0.0) {
    const double scale = sigma * sigma / (2.0 * -beta);
    return gauss + scale * std::exp(2.0 * beta * y0 / (sigma * sigma));
  }
  return gauss + s * s / (y0 + beta * t) * numerics::normal_sf(a);
}

// E[Q_t] as the integral of the tail probability. Absolute tolerance 1e-8.
inline double rbm_mean(double t, double beta, double sigma) {
  detail::check_rbm_args(t, sigma);
  const double s = sigma * std::sqrt(t);
  double cut = std::max(beta * t, 0.0) + s;
  while (rbm_tail_integral_bound(t, cut, beta, sigma) > 1e-12) cut *= 2.0;
  return numerics::adaptive_simpson([&](double y) { return rbm_tail(t, y, beta, sigma); }, 0.0, cut, 1e-8);
}

inline double rbm_stationary_mean(double beta, double sigma) {
  if (!(beta < 0.0)) throw DomainError("stationary RBM mean requires beta < 0");
  return sigma * sigma / (2.0 * -beta);
}

// Long-horizon cost per unit time of the linear control U = beta t:
// waiting c_w sigma^2/(2|beta|) plus idling c~_o |beta|.
inline double drift_tradeoff(double beta, const ModelParams& params) {
  if (!(beta < 0.0)) throw DomainError("drift_tradeoff requires beta < 0");
  const BopCoefficients c = bop_coefficients(params);
  return c.cw * c.sigma * c.sigma / (2.0 * -beta) + c.tilde_co * -beta;
}

// Per-unit-horizon BOP cost of U(t) = beta t on [0, H]:
//   (c_w/H) int_0^H E[Q_t] dt + (c~_o/H) (E[Q_H] - beta H).
inline double linear_bop_cost(double beta, double horizon, const BopCoefficients& c) {
  if (!(horizon > 0.0)) throw DomainError("horizon must be positive");
  if (c.sigma == 0.0) {
    // Noiseless reflection: Q = (beta t)^+, L = (-beta t)^+.
    const double q_end = std::max(beta, 0.0) * horizon;
    return c.cw * 0.5 * q_end + c.tilde_co * (q_end - beta * horizon) / horizon;
  }
  if (!(c.sigma > 0.0)) throw DomainError("sigma must be non-negative");
  const auto mean_at = [&](double t) { return t > 0.0 ? rbm_mean(t, beta, c.sigma) : 0.0; };
  const double waiting = numerics::adaptive_simpson(mean_at, 0.0, horizon, 1e-6);
  const double idle = mean_at(horizon) - beta * horizon;
  return (c.cw * waiting + c.tilde_co * idle) / horizon;
}

inline double linear_bop_cost(double beta, double horizon, const ModelParams& params) {
  const BopCoefficients c = bop_coefficients(params);
  if (!(c.sigma > 0.0)) throw DegenerateNoise("sigma = 0: p = 1 with deterministic service");
  return linear_bop_cost(beta, horizon, c);
}

}  // namespace apptsched
