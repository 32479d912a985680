#pragma once

namespace predint {

// Closed interval on the response scale.
struct Interval {
  double lower = 0.0;
  double upper = 0.0;

  double width() const { return upper - lower; }
  bool contains(double y) const { return lower <= y && y <= upper; }
  Interval shifted(double delta) const { return {lower + delta, upper + delta}; }

  bool operator==(const Interval&) const = default;
};

}  // namespace predint
