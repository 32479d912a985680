#include "predint/tolerance.hpp"

#include <cmath>
#include <stdexcept>

#include "predint/numkit.hpp"

namespace predint::tolerance {

SampleStats SampleStats::from_sample(std::span<const double> xs) {
  if (xs.size() < 2)
    throw std::invalid_argument("SampleStats: need at least two observations");
  double sum = 0.0;
  for (double v : xs) {
    if (!std::isfinite(v)) throw std::invalid_argument("SampleStats: non-finite value");
    sum += v;
  }
  const double n = static_cast<double>(xs.size());
  const double mean = sum / n;
  double ss = 0.0;
  for (double v : xs) {
    const double d = v - mean;
    ss += d * d;
  }
  return {xs.size(), mean, std::sqrt(ss / (n - 1.0))};
}

static void check_spec(const ToleranceSpec& spec) {
  if (!(spec.beta > 0.0 && spec.beta < 1.0))
    throw std::invalid_argument("tolerance: beta must lie in (0,1)");
  if (!(spec.gamma > 0.0 && spec.gamma < 1.0))
    throw std::invalid_argument("tolerance: gamma must lie in (0,1)");
}

double howe_factor(std::size_t n, double beta, double gamma) {
  check_spec({beta, gamma});
  if (n < 2) throw std::invalid_argument("howe_factor: n must be at least 2");
  const double nd = static_cast<double>(n);
  const double z = numkit::normal_quantile(0.5 * (1.0 + beta));
  const double chi2 = numkit::chisq_quantile(1.0 - gamma, n - 1);
  return std::sqrt((nd - 1.0) * (1.0 + 1.0 / nd) * z * z / chi2);
}

Interval normal_tolerance_interval(const SampleStats& stats, const ToleranceSpec& spec) {
  check_spec(spec);
  if (stats.n < 2) throw std::invalid_argument("tolerance: need n >= 2");
  if (!(stats.sd >= 0.0)) throw std::invalid_argument("tolerance: negative sd");
  const double half = howe_factor(stats.n, spec.beta, spec.gamma) * stats.sd;
  return {stats.mean - half, stats.mean + half};
}

}  // namespace predint::tolerance
