#pragma once

#include <cmath>
#include <cstdint>
#include <span>

namespace apptsched {

// Monte-Carlo estimate: sample mean with standard error sd / sqrt(reps).
struct Estimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::int64_t reps = 0;
};

// Sums run in index order in extended precision, so the result depends only
// on the values and their order.
inline Estimate summarize(std::span<const double> values) {
  Estimate e;
  e.reps = static_cast<std::int64_t>(values.size());
  if (values.empty()) return e;
  long double sum = 0.0L;
  for (const double v : values) sum += v;
  const long double mean = sum / static_cast<long double>(values.size());
  e.mean = static_cast<double>(mean);
  if (values.size() < 2) return e;
  long double ss = 0.0L;
  for (const double v : values) {
    const long double d = v - mean;
    ss += d * d;
  }
  const long double var = ss / static_cast<long double>(values.size() - 1);
  e.std_error = static_cast<double>(std::sqrt(var / static_cast<long double>(values.size())));
  return e;
}

}  // namespace apptsched
