#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "apptsched/errors.hpp"
#include "apptsched/model.hpp"

namespace apptsched {

struct SimOutcome {
  double makespan_W = 0.0;
  double overage_O = 0.0;
  double tau = 0.0;
  double idle = 0.0;
  std::size_t shows_count = 0;
  std::vector<double> per_job_waits;
};

// Right-continuous step function: queue length is `length` on [time, next time).
struct QueueBreakpoint {
  double time;
  std::int64_t length;
};

struct QueuePath {
  std::vector<QueueBreakpoint> breakpoints;
};

namespace detail {

inline void check_sizes(const SystemInstance& inst, const Schedule& schedule, const Realization& r) {
  if (schedule.size() != inst.population) {
    throw SizeMismatch("schedule has " + std::to_string(schedule.size()) + " slots, instance expects " +
                       std::to_string(inst.population));
  }
  if (r.shows.size() != inst.population) throw SizeMismatch("realization show flags do not match population");
  if (r.services.size() < r.show_count()) throw SizeMismatch("fewer service times than show-ups");
}

}  // namespace detail

// Aggregate outcome only; no allocation. Used by the Monte-Carlo inner loop.
struct SimTotals {
  double makespan_W = 0.0;
  double overage_O = 0.0;
  double tau = 0.0;
  double idle = 0.0;
  std::size_t shows_count = 0;
};

namespace detail {

// FCFS single-server Lindley recursion over the show-ups in slot order.
// on_job(arrival, start, departure) is called once per show-up.
template <class OnJob>
SimTotals lindley(const SystemInstance& inst, const Schedule& schedule, const Realization& r, OnJob&& on_job) {
  check_sizes(inst, schedule, r);
  const double n = static_cast<double>(inst.n);
  SimTotals out;
  double depart = 0.0;
  double busy = 0.0;
  std::size_t k = 0;
  const auto times = schedule.times();
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!r.shows[i]) continue;
    const double arrival = times[i];
    const double start = depart > arrival ? depart : arrival;
    const double service = r.services[k++] / n;
    out.makespan_W += start - arrival;
    depart = start + service;
    busy += service;
    on_job(arrival, start, depart);
  }
  out.shows_count = k;
  if (k == 0) return out;
  out.tau = depart;
  out.overage_O = depart > inst.params.horizon ? depart - inst.params.horizon : 0.0;
  out.idle = depart - busy;
  return out;
}

}  // namespace detail

inline SimTotals simulate_totals(const SystemInstance& inst, const Schedule& schedule, const Realization& r) {
  return detail::lindley(inst, schedule, r, [](double, double, double) {});
}

inline SimOutcome simulate(const SystemInstance& inst, const Schedule& schedule, const Realization& r) {
  SimOutcome out;
  const SimTotals totals = detail::lindley(
      inst, schedule, r, [&](double arrival, double start, double) { out.per_job_waits.push_back(start - arrival); });
  out.makespan_W = totals.makespan_W;
  out.overage_O = totals.overage_O;
  out.tau = totals.tau;
  out.idle = totals.idle;
  out.shows_count = totals.shows_count;
  return out;
}

// Number-in-system path reconstructed from the arrival and departure epochs.
inline QueuePath queue_path(const SystemInstance& inst, const Schedule& schedule, const Realization& r) {
  std::vector<double> arrivals;
  std::vector<double> departures;
  detail::lindley(inst, schedule, r, [&](double arrival, double, double departure) {
    arrivals.push_back(arrival);
    departures.push_back(departure);
  });

  QueuePath path;
  std::int64_t length = 0;
  std::size_t a = 0;
  std::size_t d = 0;
  while (a < arrivals.size() || d < departures.size()) {
    double t = d < departures.size() ? departures[d] : arrivals[a];
    if (a < arrivals.size() && arrivals[a] < t) t = arrivals[a];
    while (a < arrivals.size() && arrivals[a] == t) {
      ++length;
      ++a;
    }
    while (d < departures.size() && departures[d] == t) {
      --length;
      ++d;
    }
    path.breakpoints.push_back({t, length});
  }
  return path;
}

// Integral of (Q - 1)^+ over time; equals the makespan.
inline double excess_queue_integral(const QueuePath& path) {
  double total = 0.0;
  const auto& bp = path.breakpoints;
  for (std::size_t j = 0; j + 1 < bp.size(); ++j) {
    if (bp[j].length > 1) total += static_cast<double>(bp[j].length - 1) * (bp[j + 1].time - bp[j].time);
  }
  return total;
}

// Time with Q == 0 between the first breakpoint and the last.
inline double empty_time(const QueuePath& path) {
  double total = 0.0;
  const auto& bp = path.breakpoints;
  for (std::size_t j = 0; j + 1 < bp.size(); ++j) {
    if (bp[j].length == 0) total += bp[j + 1].time - bp[j].time;
  }
  return total;
}

}  // namespace apptsched
