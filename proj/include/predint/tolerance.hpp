#pragma once

#include <cstddef>
#include <span>

#include "predint/interval.hpp"

namespace predint::tolerance {

// beta: proportion of the distribution the interval must contain.
// gamma: confidence that the content is at least beta.
struct ToleranceSpec {
  double beta;
  double gamma;
};

struct SampleStats {
  std::size_t n = 0;
  double mean = 0.0;
  double sd = 0.0;  // sample standard deviation, divisor n-1

  // Two-pass mean / sd. Requires n >= 2.
  static SampleStats from_sample(std::span<const double> xs);
};

// Howe's two-sided tolerance factor for a normal sample of size n:
//   c = sqrt( (n-1) (1 + 1/n) z^2 / chi2 )
// with z the (1+beta)/2 normal quantile and chi2 the (1-gamma) quantile of
// chi-square with n-1 degrees of freedom (Howe 1969).
double howe_factor(std::size_t n, double beta, double gamma);

// [mean - c*sd, mean + c*sd]
Interval normal_tolerance_interval(const SampleStats& stats, const ToleranceSpec& spec);

}  // namespace predint::tolerance
