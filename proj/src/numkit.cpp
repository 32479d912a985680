#include "predint/numkit.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace predint::numkit {

Matrix Matrix::from_rows(const std::vector<std::vector<double>>& rows) {
  if (rows.empty()) return {};
  Matrix m(rows.size(), rows.front().size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != m.cols())
      throw std::invalid_argument("Matrix::from_rows: ragged rows");
    std::copy(rows[r].begin(), rows[r].end(), m.row(r).begin());
  }
  return m;
}

bool Matrix::all_finite() const {
  return std::all_of(data_.begin(), data_.end(),
                     [](double v) { return std::isfinite(v); });
}

double tricube(double u) {
  if (!std::isfinite(u) || u < 0.0)
    throw std::invalid_argument("tricube: u must be finite and nonnegative");
  if (u >= 1.0) return 0.0;
  const double t = 1.0 - u * u * u;
  return t * t * t;
}

namespace {

double squared_distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    const double d = a[j] - b[j];
    s += d * d;
  }
  return s;
}

void check_query(const Matrix& points, std::span<const double> query) {
  if (query.size() != points.cols())
    throw std::invalid_argument("knn: query dimension mismatch");
  for (double v : query)
    if (!std::isfinite(v)) throw std::invalid_argument("knn: non-finite query");
}

}  // namespace

std::vector<Neighbor> nearest_neighbors(const Matrix& points,
                                        std::span<const std::size_t> candidates,
                                        std::span<const double> query,
                                        std::size_t k) {
  check_query(points, query);
  if (k < 1 || k > candidates.size())
    throw std::invalid_argument("knn: k out of range (have " +
                                std::to_string(candidates.size()) + " points, k=" +
                                std::to_string(k) + ")");

  struct Entry {
    double d2;
    std::size_t index;
  };
  std::vector<Entry> entries;
  entries.reserve(candidates.size());
  for (std::size_t i : candidates)
    entries.push_back({squared_distance(points.row(i), query), i});

  const auto closer = [](const Entry& a, const Entry& b) {
    return a.d2 < b.d2 || (a.d2 == b.d2 && a.index < b.index);
  };
  std::nth_element(entries.begin(), entries.begin() + (k - 1), entries.end(), closer);
  std::sort(entries.begin(), entries.begin() + k, closer);

  std::vector<Neighbor> out;
  out.reserve(k);
  for (std::size_t i = 0; i < k; ++i)
    out.push_back({entries[i].index, std::sqrt(entries[i].d2)});
  return out;
}

std::vector<Neighbor> nearest_neighbors(const Matrix& points,
                                        std::span<const double> query,
                                        std::size_t k) {
  std::vector<std::size_t> all(points.rows());
  std::iota(all.begin(), all.end(), std::size_t{0});
  return nearest_neighbors(points, all, query, k);
}

std::vector<std::size_t> knn(const Matrix& points, std::span<const double> query,
                             std::size_t k) {
  auto neighbors = nearest_neighbors(points, query, k);
  std::vector<std::size_t> indices;
  indices.reserve(neighbors.size());
  for (const auto& n : neighbors) indices.push_back(n.index);
  return indices;
}

namespace {

// Cholesky factorization in place; returns false when a pivot collapses or
// the pivot-ratio condition estimate exceeds `cond_limit`.
bool cholesky(std::vector<double>& a, std::size_t n, double cond_limit) {
  double min_piv = 0.0, max_piv = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    double d = a[j * n + j];
    for (std::size_t t = 0; t < j; ++t) d -= a[j * n + t] * a[j * n + t];
    if (!(d > 0.0)) return false;
    if (j == 0) {
      min_piv = max_piv = d;
    } else {
      min_piv = std::min(min_piv, d);
      max_piv = std::max(max_piv, d);
    }
    const double l = std::sqrt(d);
    a[j * n + j] = l;
    for (std::size_t i = j + 1; i < n; ++i) {
      double s = a[i * n + j];
      for (std::size_t t = 0; t < j; ++t) s -= a[i * n + t] * a[j * n + t];
      a[i * n + j] = s / l;
    }
  }
  return max_piv <= cond_limit * min_piv;
}

void cholesky_solve(const std::vector<double>& l, std::size_t n,
                    std::vector<double>& x) {
  for (std::size_t i = 0; i < n; ++i) {
    double s = x[i];
    for (std::size_t t = 0; t < i; ++t) s -= l[i * n + t] * x[t];
    x[i] = s / l[i * n + i];
  }
  for (std::size_t ii = n; ii-- > 0;) {
    double s = x[ii];
    for (std::size_t t = ii + 1; t < n; ++t) s -= l[t * n + ii] * x[t];
    x[ii] = s / l[ii * n + ii];
  }
}

}  // namespace

WlsFit wls_fit(const Matrix& design, std::span<const double> y,
               std::span<const double> weights) {
  const std::size_t m = design.rows();
  const std::size_t n = design.cols();
  if (m == 0 || n == 0) throw std::invalid_argument("wls_fit: empty design");
  if (y.size() != m || weights.size() != m)
    throw std::invalid_argument("wls_fit: size mismatch");
  if (!design.all_finite())
    throw std::invalid_argument("wls_fit: non-finite design entry");

  std::size_t positive = 0;
  for (std::size_t i = 0; i < m; ++i) {
    if (!std::isfinite(y[i]) || !std::isfinite(weights[i]))
      throw std::invalid_argument("wls_fit: non-finite input");
    if (weights[i] < 0.0)
      throw std::invalid_argument("wls_fit: negative weight");
    if (weights[i] > 0.0) ++positive;
  }
  if (positive < n)
    throw std::invalid_argument("wls_fit: fewer positively weighted rows than columns");

  // Weighted normal equations A = X^T W X, b = X^T W y.
  std::vector<double> gram(n * n, 0.0);
  std::vector<double> rhs(n, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    const double w = weights[i];
    if (w == 0.0) continue;
    const auto xi = design.row(i);
    for (std::size_t a = 0; a < n; ++a) {
      const double wxa = w * xi[a];
      rhs[a] += wxa * y[i];
      for (std::size_t b = a; b < n; ++b) gram[a * n + b] += wxa * xi[b];
    }
  }
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < a; ++b) gram[a * n + b] = gram[b * n + a];

  WlsFit fit;
  std::vector<double> factor = gram;
  if (!cholesky(factor, n, 1e12)) {
    double trace = 0.0;
    for (std::size_t a = 0; a < n; ++a) trace += gram[a * n + a];
    const double lambda = 1e-8 * (trace / static_cast<double>(n));
    factor = gram;
    for (std::size_t a = 0; a < n; ++a) factor[a * n + a] += lambda;
    if (!cholesky(factor, n, 1e30))
      throw std::runtime_error("wls_fit: singular system after regularization");
    fit.regularized = true;
  }
  fit.coefficients = rhs;
  cholesky_solve(factor, n, fit.coefficients);
  return fit;
}

}  // namespace predint::numkit
