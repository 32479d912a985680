#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "predint/numkit.hpp"

namespace predint::numkit {

namespace {

constexpr int kMaxNewton = 200;

void check_probability(double p) {
  if (!std::isfinite(p) || p <= 0.0 || p >= 1.0)
    throw std::invalid_argument("quantile: p must lie in (0,1)");
}

double normal_pdf(double z) {
  return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi);
}

// Regularized lower incomplete gamma P(a,x).
// Series for x < a+1, Lentz continued fraction for the complement otherwise;
// see Abramowitz & Stegun 6.5 / Numerical Recipes 6.2.
double regularized_gamma_p(double a, double x) {
  if (x <= 0.0) return 0.0;
  const double log_prefix = a * std::log(x) - x - std::lgamma(a);
  if (x < a + 1.0) {
    double term = 1.0 / a;
    double sum = term;
    for (int n = 1; n < 10000000; ++n) {
      term *= x / (a + n);
      sum += term;
      if (std::fabs(term) < std::fabs(sum) * 1e-17) break;
    }
    return sum * std::exp(log_prefix);
  }
  // Modified Lentz for Q(a,x).
  const double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int n = 1; n < 10000000; ++n) {
    const double an = -static_cast<double>(n) * (static_cast<double>(n) - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::fabs(delta - 1.0) < 1e-16) break;
  }
  return 1.0 - std::exp(log_prefix) * h;
}

// Lower-tail quantile for p in (0, 0.5]. Seeded with the Abramowitz & Stegun
// 26.2.23 rational approximation, then polished against normal_cdf.
double normal_quantile_lower(double p) {
  const double t = std::sqrt(-2.0 * std::log(p));
  double z = -(t - (2.30753 + 0.27061 * t) / (1.0 + t * (0.99229 + 0.04481 * t)));

  double lo = -40.0, hi = 0.0;
  for (int it = 0; it < kMaxNewton; ++it) {
    const double f = normal_cdf(z) - p;
    if (f > 0.0)
      hi = z;
    else if (f < 0.0)
      lo = z;
    if (std::fabs(f) <= 1e-16 + 4e-16 * p) break;
    const double deriv = normal_pdf(z);
    double step = deriv > 0.0 ? f / deriv : 0.0;
    double next = z - step;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (next == z) break;
    z = next;
  }
  return z;
}

}  // namespace

double normal_cdf(double z) {
  return 0.5 * std::erfc(-z / std::numbers::sqrt2);
}

double normal_quantile(double p) {
  check_probability(p);
  if (p == 0.5) return 0.0;
  if (p > 0.5) return -normal_quantile_lower(1.0 - p);
  return normal_quantile_lower(p);
}

double chisq_cdf(double x, std::size_t dof) {
  if (dof < 1) throw std::invalid_argument("chisq_cdf: dof must be positive");
  if (!std::isfinite(x)) throw std::invalid_argument("chisq_cdf: non-finite x");
  if (x <= 0.0) return 0.0;
  return regularized_gamma_p(0.5 * static_cast<double>(dof), 0.5 * x);
}

double chisq_quantile(double p, std::size_t dof) {
  check_probability(p);
  if (dof < 1) throw std::invalid_argument("chisq_quantile: dof must be positive");

  const double a = 0.5 * static_cast<double>(dof);
  const double nu = static_cast<double>(dof);

  // Wilson–Hilferty starting point.
  const double z = normal_quantile(p);
  const double h = 2.0 / (9.0 * nu);
  double x = nu * std::pow(1.0 - h + z * std::sqrt(h), 3.0);
  if (!(x > 0.0)) x = 1e-8;

  double lo = 0.0;
  double hi = std::numeric_limits<double>::infinity();
  for (int it = 0; it < kMaxNewton; ++it) {
    const double f = chisq_cdf(x, dof) - p;
    if (f > 0.0)
      hi = x;
    else if (f < 0.0)
      lo = x;
    if (std::fabs(f) <= 1e-13) break;
    const double log_pdf =
        (a - 1.0) * std::log(x) - 0.5 * x - std::lgamma(a) - a * std::numbers::ln2;
    const double deriv = std::exp(log_pdf);
    double next = deriv > 0.0 ? x - f / deriv : -1.0;
    if (!(next > lo && next < hi))
      next = std::isinf(hi) ? 2.0 * (lo + 1.0) : 0.5 * (lo + hi);
    if (next == x) break;
    x = next;
  }
  return x;
}

}  // namespace predint::numkit
