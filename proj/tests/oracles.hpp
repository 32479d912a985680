// Independent reference implementations used to freeze expected values.
// Everything here deliberately takes a different route than the library:
// bisection instead of Newton, quadrature instead of series, Gauss-Jordan
// elimination instead of Cholesky, full sorts instead of partial selection.
#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <span>
#include <stdexcept>
#include <vector>

namespace oracle {

inline double normal_cdf(double z) { return 0.5 * (1.0 + std::erf(z / std::sqrt(2.0))); }

// Plain bisection on a monotone CDF.
inline double bisect_quantile(const std::function<double(double)>& cdf, double p,
                              double lo, double hi, int steps = 200) {
  for (int i = 0; i < steps; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (cdf(mid) < p)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

inline double normal_quantile(double p) {
  return bisect_quantile([](double z) { return normal_cdf(z); }, p, -40.0, 40.0);
}

inline double chisq_pdf(double x, double dof) {
  if (x <= 0.0) return 0.0;
  const double a = 0.5 * dof;
  return std::exp((a - 1.0) * std::log(x) - 0.5 * x - std::lgamma(a) -
                  a * std::log(2.0));
}

namespace detail {
inline double simpson(const std::function<double(double)>& f, double a, double b,
                      double fa, double fm, double fb, double whole, double tol,
                      int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  if (depth <= 0 || std::fabs(left + right - whole) < 15.0 * tol)
    return left + right + (left + right - whole) / 15.0;
  return simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}
}  // namespace detail

inline double integrate(const std::function<double(double)>& f, double a, double b,
                        double tol = 1e-13) {
  const double m = 0.5 * (a + b);
  const double fa = f(a), fm = f(m), fb = f(b);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return detail::simpson(f, a, b, fa, fm, fb, whole, tol, 50);
}

// Chi-square CDF by adaptive quadrature of the density.
inline double chisq_cdf(double x, double dof) {
  if (x <= 0.0) return 0.0;
  return integrate([dof](double t) { return chisq_pdf(t, dof); }, 0.0, x);
}

inline double chisq_quantile(double p, double dof) {
  return bisect_quantile([dof](double x) { return chisq_cdf(x, dof); }, p, 0.0,
                         std::max(4.0 * dof, 100.0));
}

// All indices ordered by (distance, index); a full stable reference for knn.
inline std::vector<std::size_t> knn(const std::vector<std::vector<double>>& points,
                                    const std::vector<double>& query, std::size_t k) {
  std::vector<std::size_t> idx(points.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::vector<double> d2(points.size(), 0.0);
  for (std::size_t i = 0; i < points.size(); ++i)
    for (std::size_t j = 0; j < query.size(); ++j)
      d2[i] += (points[i][j] - query[j]) * (points[i][j] - query[j]);
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    return d2[a] < d2[b] || (d2[a] == d2[b] && a < b);
  });
  idx.resize(k);
  return idx;
}

// Weighted least squares through the normal equations, solved by
// Gauss-Jordan elimination with partial pivoting in extended precision.
inline std::vector<double> wls(const std::vector<std::vector<double>>& design,
                               const std::vector<double>& y,
                               const std::vector<double>& w) {
  const std::size_t m = design.size();
  const std::size_t n = design.front().size();
  std::vector<std::vector<long double>> aug(n, std::vector<long double>(n + 1, 0.0L));
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = 0; b < n; ++b)
        aug[a][b] += static_cast<long double>(w[i]) * design[i][a] * design[i][b];
      aug[a][n] += static_cast<long double>(w[i]) * design[i][a] * y[i];
    }
  }
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::fabs(static_cast<double>(aug[r][col])) >
          std::fabs(static_cast<double>(aug[pivot][col])))
        pivot = r;
    std::swap(aug[col], aug[pivot]);
    if (aug[col][col] == 0.0L) throw std::runtime_error("oracle wls: singular");
    const long double diag = aug[col][col];
    for (auto& v : aug[col]) v /= diag;
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col) continue;
      const long double factor = aug[r][col];
      for (std::size_t c = 0; c <= n; ++c) aug[r][c] -= factor * aug[col][c];
    }
  }
  std::vector<double> beta(n);
  for (std::size_t i = 0; i < n; ++i) beta[i] = static_cast<double>(aug[i][n]);
  return beta;
}

inline double mean(std::span<const double> xs) {
  double s = 0.0;
  for (double v : xs) s += v;
  return s / static_cast<double>(xs.size());
}

inline double sample_sd(std::span<const double> xs) {
  const double m = mean(xs);
  double ss = 0.0;
  for (double v : xs) ss += (v - m) * (v - m);
  return std::sqrt(ss / static_cast<double>(xs.size() - 1));
}

}  // namespace oracle
