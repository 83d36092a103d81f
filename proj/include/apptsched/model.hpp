#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "apptsched/errors.hpp"
#include "apptsched/rng.hpp"

namespace apptsched {

enum class ServiceLaw { Exponential, Deterministic, Gamma, Lognormal };

inline std::string_view to_string(ServiceLaw law) {
  switch (law) {
    case ServiceLaw::Exponential: return "exponential";
    case ServiceLaw::Deterministic: return "deterministic";
    case ServiceLaw::Gamma: return "gamma";
    case ServiceLaw::Lognormal: return "lognormal";
  }
  return "unknown";
}

inline ServiceLaw parse_service_law(std::string_view name) {
  if (name == "exponential") return ServiceLaw::Exponential;
  if (name == "deterministic") return ServiceLaw::Deterministic;
  if (name == "gamma") return ServiceLaw::Gamma;
  if (name == "lognormal") return ServiceLaw::Lognormal;
  throw DomainError("unknown service_law '" + std::string(name) + "'");
}

// Primitive constants of the scheduling problem.
struct ModelParams {
  double alpha = 1.0;    // population mass per unit of scale
  double p = 1.0;        // show-up probability
  double mu = 1.0;       // service rate
  double horizon = 1.0;  // H
  double cs2 = 1.0;      // squared coefficient of variation of service time
  ServiceLaw service_law = ServiceLaw::Exponential;
  double cw = 1.0;  // waiting cost rate
  double co = 1.0;  // overage cost rate

  // p*alpha > mu*H: expected demand exceeds horizon capacity.
  bool overloaded() const { return p * alpha > mu * horizon; }

  // Fluid completion time p*alpha/mu.
  double tau_bar() const { return p * alpha / mu; }

  bool operator==(const ModelParams&) const = default;
};

// Returns the params unchanged when every invariant holds. Non-overloaded
// sets are accepted; analytics reject them separately.
inline ModelParams validate_params(const ModelParams& raw) {
  auto fail = [](const std::string& what) { throw DomainError("invalid params: " + what); };
  if (!(raw.p > 0.0 && raw.p <= 1.0)) fail("p must lie in (0,1]");
  if (!(raw.mu > 0.0) || !std::isfinite(raw.mu)) fail("mu must be positive");
  if (!(raw.horizon > 0.0) || !std::isfinite(raw.horizon)) fail("horizon must be positive");
  if (!(raw.alpha > 0.0) || !std::isfinite(raw.alpha)) fail("alpha must be positive");
  if (!(raw.cs2 >= 0.0) || !std::isfinite(raw.cs2)) fail("cs2 must be non-negative");
  if (!(raw.cw >= 0.0) || !(raw.co >= 0.0)) fail("cost rates must be non-negative");
  switch (raw.service_law) {
    case ServiceLaw::Exponential:
      if (raw.cs2 != 1.0) fail("exponential service requires cs2 = 1");
      break;
    case ServiceLaw::Deterministic:
      if (raw.cs2 != 0.0) fail("deterministic service requires cs2 = 0");
      break;
    case ServiceLaw::Gamma:
    case ServiceLaw::Lognormal:
      if (!(raw.cs2 > 0.0)) fail("gamma/lognormal service requires cs2 > 0");
      break;
  }
  return raw;
}

// The n-th system of the scaled sequence.
struct SystemInstance {
  ModelParams params;
  std::int64_t n = 1;
  std::size_t population = 0;  // ceil(alpha * n)
  double service_scale = 1.0;  // service times are nu_i / n
  double cw_n = 0.0;           // cw / n
  double co_n = 0.0;           // co
};

inline SystemInstance build_instance(const ModelParams& params, std::int64_t n) {
  if (n < 1) throw DomainError("scale index n must be >= 1");
  const ModelParams valid = validate_params(params);
  SystemInstance inst;
  inst.params = valid;
  inst.n = n;
  const double mass = valid.alpha * static_cast<double>(n);
  inst.population = static_cast<std::size_t>(std::ceil(mass));
  if (inst.population == 0) inst.population = 1;
  inst.service_scale = 1.0 / static_cast<double>(n);
  inst.cw_n = valid.cw / static_cast<double>(n);
  inst.co_n = valid.co;
  return inst;
}

// Non-decreasing appointment times in [0, H].
class Schedule {
 public:
  Schedule() = default;

  // Throws DomainError unless times are sorted and lie in [0, horizon].
  Schedule(std::vector<double> times, double horizon) : times_(std::move(times)) {
    for (std::size_t i = 0; i < times_.size(); ++i) {
      const double t = times_[i];
      if (!(t >= 0.0 && t <= horizon)) throw DomainError("schedule time outside [0, H]");
      if (i > 0 && t < times_[i - 1]) throw DomainError("schedule is not non-decreasing");
    }
  }

  std::span<const double> times() const { return times_; }
  std::size_t size() const { return times_.size(); }
  double operator[](std::size_t i) const { return times_[i]; }

  bool operator==(const Schedule&) const = default;

 private:
  std::vector<double> times_;
};

// One draw of show flags (by slot) and raw service times (by service order).
struct Realization {
  std::vector<std::uint8_t> shows;
  std::vector<double> services;

  std::size_t show_count() const {
    return static_cast<std::size_t>(std::count(shows.begin(), shows.end(), std::uint8_t{1}));
  }
};

namespace detail {

template <class Sink>
void draw_services(const ModelParams& prm, Philox4x64& rng, std::size_t count, Sink&& sink) {
  const double mean = 1.0 / prm.mu;
  switch (prm.service_law) {
    case ServiceLaw::Deterministic:
      for (std::size_t i = 0; i < count; ++i) sink(mean);
      break;
    case ServiceLaw::Exponential: {
      std::exponential_distribution<double> dist(prm.mu);
      for (std::size_t i = 0; i < count; ++i) {
        double v = dist(rng);
        // generate_canonical can return exactly 0; services must be positive.
        while (!(v > 0.0)) v = dist(rng);
        sink(v);
      }
      break;
    }
    case ServiceLaw::Gamma: {
      std::gamma_distribution<double> dist(1.0 / prm.cs2, prm.cs2 / prm.mu);
      for (std::size_t i = 0; i < count; ++i) {
        double v = dist(rng);
        while (!(v > 0.0)) v = dist(rng);
        sink(v);
      }
      break;
    }
    case ServiceLaw::Lognormal: {
      const double s2 = std::log1p(prm.cs2);
      std::lognormal_distribution<double> dist(std::log(mean) - 0.5 * s2, std::sqrt(s2));
      for (std::size_t i = 0; i < count; ++i) sink(dist(rng));
      break;
    }
  }
}

}  // namespace detail

// Refills `out` in place so Monte-Carlo loops can reuse its buffers.
inline void sample_realization_into(const SystemInstance& inst, Philox4x64& rng, Realization& out) {
  const std::size_t count = inst.population;
  const double p = inst.params.p;
  out.shows.resize(count);
  for (std::size_t i = 0; i < count; ++i) {
    out.shows[i] = (p >= 1.0 || uniform01(rng) < p) ? 1 : 0;
  }
  out.services.resize(count);
  std::size_t i = 0;
  detail::draw_services(inst.params, rng, count, [&](double v) { out.services[i++] = v; });
}

inline Realization sample_realization(const SystemInstance& inst, Philox4x64& rng) {
  Realization r;
  sample_realization_into(inst, rng, r);
  return r;
}

}  // namespace apptsched
