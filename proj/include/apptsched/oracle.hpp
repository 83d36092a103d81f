#pragma once

#include <cstddef>
#include <vector>

#include "apptsched/model.hpp"
#include "apptsched/qsim.hpp"

namespace apptsched {

// Pathwise-optimal cost when show flags and service times are known upfront.
struct CIOutcome {
  double makespan_W_star = 0.0;
  double overage_O_star = 0.0;
  double tau_star = 0.0;
};

// With K show-ups and departure epochs t_m = sum_{i<=m} nu_i / n, the optimal
// arrivals keep exactly one job in system before H and batch the rest at H.
// W* = int_H^tau* (Q - 1)^+ dt, evaluated as sum_m (t_m - H)^+: job m+1 waits
// at H until t_m.
inline CIOutcome ci_outcome(const SystemInstance& inst, const Realization& r) {
  if (r.shows.size() != inst.population) throw SizeMismatch("realization show flags do not match population");
  const std::size_t shows = r.show_count();
  if (r.services.size() < shows) throw SizeMismatch("fewer service times than show-ups");
  CIOutcome out;
  if (shows == 0) return out;

  const double n = static_cast<double>(inst.n);
  const double h = inst.params.horizon;
  double epoch = 0.0;
  double area = 0.0;
  for (std::size_t m = 0; m < shows; ++m) {
    area += epoch > h ? epoch - h : 0.0;
    epoch += r.services[m] / n;
  }
  out.tau_star = epoch;
  out.overage_O_star = epoch > h ? epoch - h : 0.0;
  out.makespan_W_star = area;
  return out;
}

// A concrete schedule attaining ci_outcome: the k-th show-up arrives when the
// server frees up (capped at H); each no-show slot takes the time of the next
// show-up slot, or H if none follows.
inline Schedule ci_schedule(const SystemInstance& inst, const Realization& r) {
  if (r.shows.size() != inst.population) throw SizeMismatch("realization show flags do not match population");
  if (r.services.size() < r.show_count()) throw SizeMismatch("fewer service times than show-ups");
  const double n = static_cast<double>(inst.n);
  const double h = inst.params.horizon;
  const std::size_t slots = inst.population;
  std::vector<double> times(slots, h);

  double free_at = 0.0;
  std::size_t k = 0;
  for (std::size_t i = 0; i < slots; ++i) {
    if (!r.shows[i]) continue;
    times[i] = free_at < h ? free_at : h;
    free_at += r.services[k++] / n;
  }
  // Back-fill no-shows from the right.
  double next = h;
  for (std::size_t i = slots; i-- > 0;) {
    if (r.shows[i]) next = times[i];
    else times[i] = next;
  }
  return Schedule(std::move(times), h);
}

}  // namespace apptsched
