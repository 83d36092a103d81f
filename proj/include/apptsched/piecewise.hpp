#pragma once

#include <cstddef>
#include <vector>

#include "apptsched/errors.hpp"

namespace apptsched {

struct Knot {
  double time;
  double value;
};

// Right-continuous piecewise-linear function on [knots.front().time, inf).
//
// Consecutive knots with equal time encode a jump: the earlier one is the
// left limit, the later one the value from that time on. Between knots with
// distinct times the function is linear; past the last knot it is constant.
class PiecewiseLinear {
 public:
  PiecewiseLinear() = default;

  explicit PiecewiseLinear(std::vector<Knot> knots) : knots_(std::move(knots)) {
    if (knots_.empty()) throw DomainError("piecewise-linear function needs at least one knot");
    for (std::size_t j = 1; j < knots_.size(); ++j) {
      if (knots_[j].time < knots_[j - 1].time) throw DomainError("knot times must be non-decreasing");
    }
  }

  const std::vector<Knot>& knots() const { return knots_; }

  double start() const { return knots_.front().time; }
  double end() const { return knots_.back().time; }
  double final_value() const { return knots_.back().value; }

  double operator()(double t) const {
    if (t < knots_.front().time) return knots_.front().value;
    // Last knot with time <= t.
    std::size_t lo = 0;
    std::size_t hi = knots_.size();
    while (hi - lo > 1) {
      const std::size_t mid = (lo + hi) / 2;
      if (knots_[mid].time <= t) lo = mid;
      else hi = mid;
    }
    if (lo + 1 == knots_.size()) return knots_[lo].value;
    const Knot& a = knots_[lo];
    const Knot& b = knots_[lo + 1];
    return a.value + (b.value - a.value) * (t - a.time) / (b.time - a.time);
  }

  // Left limit at t.
  double left_limit(double t) const {
    if (t <= knots_.front().time) return knots_.front().value;
    std::size_t lo = 0;
    std::size_t hi = knots_.size();
    // First knot with time >= t.
    while (lo < hi) {
      const std::size_t mid = (lo + hi) / 2;
      if (knots_[mid].time < t) lo = mid + 1;
      else hi = mid;
    }
    if (lo == knots_.size()) return knots_.back().value;
    const Knot& a = knots_[lo - 1];
    const Knot& b = knots_[lo];
    return a.value + (b.value - a.value) * (t - a.time) / (b.time - a.time);
  }

  bool non_decreasing() const {
    for (std::size_t j = 1; j < knots_.size(); ++j) {
      if (knots_[j].value < knots_[j - 1].value) return false;
    }
    return true;
  }

 private:
  std::vector<Knot> knots_;
};

// Non-decreasing cumulative scheduling control on [0, H]: a piecewise-linear
// part on [0, H) plus whatever terminal mass the last knot adds at H.
class CumulativeControl {
 public:
  CumulativeControl() = default;

  CumulativeControl(std::vector<Knot> knots, double horizon) : fn_(std::move(knots)), horizon_(horizon) {
    if (fn_.start() != 0.0) throw DomainError("cumulative control must start at t = 0");
    if (fn_.end() != horizon_) throw DomainError("cumulative control must end at t = H");
    if (fn_.knots().front().value < 0.0) throw DomainError("cumulative control must be non-negative");
    if (!fn_.non_decreasing()) throw DomainError("cumulative control must be non-decreasing");
  }

  const PiecewiseLinear& function() const { return fn_; }
  const std::vector<Knot>& knots() const { return fn_.knots(); }
  double horizon() const { return horizon_; }
  double mass() const { return fn_.final_value(); }
  double operator()(double t) const { return fn_(t); }

 private:
  PiecewiseLinear fn_;
  double horizon_ = 0.0;
};

}  // namespace apptsched
