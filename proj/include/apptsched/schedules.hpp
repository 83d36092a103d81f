#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "apptsched/analytics.hpp"
#include "apptsched/errors.hpp"
#include "apptsched/model.hpp"
#include "apptsched/piecewise.hpp"

namespace apptsched {

// Which drift coefficient the diffusion schedule uses.
enum class DriftConvention {
  Optimal,  // beta* from the large-horizon Brownian problem
  Legacy,   // -c*_H from the closed-form summary constant
};

// T_i = min{p (i-1) / (n mu), H}.
inline Schedule fluid_schedule(const SystemInstance& inst) {
  const auto& prm = inst.params;
  const double n = static_cast<double>(inst.n);
  const double h = prm.horizon;
  std::vector<double> times(inst.population);
  for (std::size_t i = 0; i < times.size(); ++i) {
    const double t = prm.p * static_cast<double>(i) / (n * prm.mu);
    times[i] = t < h ? t : h;
  }
  return Schedule(std::move(times), h);
}

// T_i = min{p (i-1) / (n mu + sqrt(n) beta), H}.
//
// Throws DomainError when mu + beta/sqrt(n) <= 0, or when more than N_n slots
// would fall before H unless `clamp` is set (then the schedule simply ends
// before H).
inline Schedule linear_drift_schedule(const SystemInstance& inst, double beta, bool clamp = false) {
  const auto& prm = inst.params;
  const double n = static_cast<double>(inst.n);
  const double rate = n * prm.mu + std::sqrt(n) * beta;
  if (!(rate > 0.0)) {
    throw DomainError("linear drift schedule needs n > (beta/mu)^2, got n = " + std::to_string(inst.n));
  }
  const double h = prm.horizon;
  // Slots i-1 = 0, 1, ... with p (i-1) / rate < H.
  const double pre_h = std::ceil(h * rate / prm.p);
  if (!clamp && pre_h > static_cast<double>(inst.population)) {
    throw DomainError("linear drift schedule places more than N_n slots before H");
  }
  std::vector<double> times(inst.population);
  for (std::size_t i = 0; i < times.size(); ++i) {
    const double t = prm.p * static_cast<double>(i) / rate;
    times[i] = t < h ? t : h;
  }
  return Schedule(std::move(times), h);
}

inline double diffusion_drift(const ModelParams& params, DriftConvention convention) {
  const DiffusionConstants dc = diffusion_constants(params);
  return convention == DriftConvention::Optimal ? dc.beta_star : -dc.c_star_legacy;
}

inline Schedule diffusion_schedule(const SystemInstance& inst, DriftConvention convention = DriftConvention::Optimal) {
  return linear_drift_schedule(inst, diffusion_drift(inst.params, convention));
}

// T_i = H (i-1) / (N-1); a single slot sits at 0.
inline Schedule uniform_schedule(const SystemInstance& inst) {
  const double h = inst.params.horizon;
  const std::size_t count = inst.population;
  std::vector<double> times(count, 0.0);
  if (count > 1) {
    for (std::size_t i = 0; i < count; ++i) {
      times[i] = h * static_cast<double>(i) / static_cast<double>(count - 1);
    }
    times.back() = h;
  }
  return Schedule(std::move(times), h);
}

// Counting function E(t) = #{i : T_i <= t} as a step control.
inline CumulativeControl counting_function(const Schedule& schedule, double horizon) {
  std::vector<Knot> knots{{0.0, 0.0}};
  const auto times = schedule.times();
  std::size_t i = 0;
  while (i < times.size()) {
    const double t = times[i];
    const double before = static_cast<double>(i);
    while (i < times.size() && times[i] == t) ++i;
    if (t != knots.back().time) knots.push_back({t, before});
    knots.push_back({t, static_cast<double>(i)});
  }
  if (knots.back().time != horizon) knots.push_back({horizon, static_cast<double>(times.size())});
  return CumulativeControl(std::move(knots), horizon);
}

// T_i = inf{t : control(t) >= i}, the generalized inverse of a control with
// mass N_n.
inline Schedule from_cumulative(const SystemInstance& inst, const CumulativeControl& control) {
  const double mass = static_cast<double>(inst.population);
  if (std::abs(control.mass() - mass) > 1e-9 * std::max(1.0, mass)) {
    throw MassMismatch("control mass " + std::to_string(control.mass()) + " differs from N_n = " +
                       std::to_string(inst.population));
  }
  const double h = inst.params.horizon;
  if (control.horizon() != h) throw DomainError("control horizon differs from params.horizon");
  const auto& knots = control.knots();
  std::vector<double> times(inst.population);
  std::size_t j = 0;  // first knot whose value reaches the current level
  for (std::size_t i = 0; i < times.size(); ++i) {
    const double level = static_cast<double>(i + 1);
    while (j < knots.size() && knots[j].value < level) ++j;
    double t = h;
    if (j < knots.size()) {
      if (j == 0 || knots[j - 1].time == knots[j].time) {
        t = knots[j].time;
      } else {
        const Knot& a = knots[j - 1];
        const Knot& b = knots[j];
        t = a.time + (level - a.value) * (b.time - a.time) / (b.value - a.value);
      }
    }
    times[i] = std::clamp(t, 0.0, h);
  }
  return Schedule(std::move(times), h);
}

// Continuous version of the fluid counting function 1 + n mu t / p on [0, H),
// capped at N_n; its generalized inverse is the fluid schedule.
inline CumulativeControl fluid_counting_control(const SystemInstance& inst) {
  const auto& prm = inst.params;
  const double h = prm.horizon;
  const double n = static_cast<double>(inst.n);
  const double total = static_cast<double>(inst.population);
  const double slope = n * prm.mu / prm.p;
  std::vector<Knot> knots{{0.0, 0.0}, {0.0, std::min(1.0, total)}};
  const double reach = (total - 1.0) / slope;  // time the line hits N_n
  if (reach < h) {
    knots.push_back({reach, total});
    knots.push_back({h, total});
  } else {
    knots.push_back({h, 1.0 + slope * h});
    knots.push_back({h, total});
  }
  return CumulativeControl(std::move(knots), h);
}

}  // namespace apptsched
