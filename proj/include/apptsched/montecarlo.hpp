#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "apptsched/analytics.hpp"
#include "apptsched/errors.hpp"
#include "apptsched/estimate.hpp"
#include "apptsched/model.hpp"
#include "apptsched/oracle.hpp"
#include "apptsched/parallel.hpp"
#include "apptsched/qsim.hpp"
#include "apptsched/rng.hpp"

namespace apptsched {

struct McOptions {
  std::int64_t reps = 2;
  RngPolicy rng;
  unsigned threads = 0;  // 0: hardware concurrency. Never changes results.
};

namespace detail {

inline void check_reps(std::int64_t reps) {
  if (reps < 2) throw DomainError("Monte-Carlo estimates need reps >= 2, got " + std::to_string(reps));
}

inline double schedule_cost(const SystemInstance& inst, const Schedule& schedule, const Realization& r) {
  const SimTotals s = simulate_totals(inst, schedule, r);
  return inst.cw_n * s.makespan_W + inst.co_n * s.overage_O;
}

inline double ci_cost(const SystemInstance& inst, const Realization& r) {
  const CIOutcome ci = ci_outcome(inst, r);
  return inst.cw_n * ci.makespan_W_star + inst.co_n * ci.overage_O_star;
}

// Per-replication values of f(realization_k), realization_k from substream(k).
template <class F>
std::vector<double> per_replication(const SystemInstance& inst, const McOptions& opt, F&& f) {
  check_reps(opt.reps);
  return run_indexed(
      opt.reps, opt.threads, [] { return Realization{}; },
      [&](std::int64_t k, Realization& r) {
        Philox4x64 rng = opt.rng.substream(static_cast<std::uint64_t>(k));
        sample_realization_into(inst, rng, r);
        return f(r);
      });
}

}  // namespace detail

// J_n = c_{w,n} E[W_n] + c_{o,n} E[O_n].
inline Estimate estimate_cost(const SystemInstance& inst, const Schedule& schedule, const McOptions& opt) {
  if (schedule.size() != inst.population) throw SizeMismatch("schedule length differs from population");
  const auto values =
      detail::per_replication(inst, opt, [&](const Realization& r) { return detail::schedule_cost(inst, schedule, r); });
  return summarize(values);
}

// Complete-information cost c_{w,n} W* + c_{o,n} O*.
inline Estimate estimate_ci_cost(const SystemInstance& inst, const McOptions& opt) {
  const auto values = detail::per_replication(inst, opt, [&](const Realization& r) { return detail::ci_cost(inst, r); });
  return summarize(values);
}

// Per-replication differences cost(schedule) - cost(CI), both on the same draw.
inline std::vector<double> sg_differences(const SystemInstance& inst, const Schedule& schedule, const McOptions& opt) {
  if (schedule.size() != inst.population) throw SizeMismatch("schedule length differs from population");
  return detail::per_replication(inst, opt, [&](const Realization& r) {
    return detail::schedule_cost(inst, schedule, r) - detail::ci_cost(inst, r);
  });
}

// Stochasticity gap of `schedule` estimated with common random numbers.
inline Estimate estimate_sg(const SystemInstance& inst, const Schedule& schedule, const McOptions& opt) {
  return summarize(sg_differences(inst, schedule, opt));
}

// sqrt(n) (J_n - V_bar), applied to mean and standard error.
inline Estimate scaled_diffusion_cost(const Estimate& cost, const ModelParams& params, std::int64_t n) {
  const double v_bar = fluid_summary(params).v_bar;
  const double root_n = std::sqrt(static_cast<double>(n));
  return {root_n * (cost.mean - v_bar), root_n * cost.std_error, cost.reps};
}

}  // namespace apptsched
