#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "predint/matrix.hpp"

namespace predint::numkit {

// Tricube kernel weight (1 - u^3)^3 for u in [0,1), 0 beyond the bandwidth.
// The 1/b normalization is dropped: it cancels inside a weighted least
// squares argmin.
double tricube(double u);

struct Neighbor {
  std::size_t index;
  double distance;  // Euclidean
};

// K nearest rows of `points` to `query` in ascending L2 distance.
// Ties are broken toward the lower row index.
std::vector<Neighbor> nearest_neighbors(const Matrix& points,
                                        std::span<const double> query,
                                        std::size_t k);

// Same search restricted to a subset of row indices.
std::vector<Neighbor> nearest_neighbors(const Matrix& points,
                                        std::span<const std::size_t> candidates,
                                        std::span<const double> query,
                                        std::size_t k);

std::vector<std::size_t> knn(const Matrix& points, std::span<const double> query,
                             std::size_t k);

struct WlsFit {
  std::vector<double> coefficients;
  bool regularized = false;  // ridge fallback was applied
};

// Minimizes sum_i w_i (y_i - x_i^T beta)^2 via the weighted normal equations.
// `design` carries the intercept column already. A near-singular system
// (pivot-ratio condition estimate above 1e12) falls back to Tikhonov
// regularization with lambda = 1e-8 * mean(diag of the weighted Gram matrix)
// and is flagged in the result.
WlsFit wls_fit(const Matrix& design, std::span<const double> y,
               std::span<const double> weights);

// Standard normal CDF.
double normal_cdf(double z);

// p-quantile of the standard normal distribution, p in (0,1).
// Inverts normal_cdf with a bracketed Newton iteration; |cdf(z) - p| < 1e-12.
double normal_quantile(double p);

// Chi-square CDF with `dof` degrees of freedom (regularized lower
// incomplete gamma).
double chisq_cdf(double x, std::size_t dof);

// p-quantile of the chi-square distribution; |cdf(x) - p| < 1e-10.
double chisq_quantile(double p, std::size_t dof);

}  // namespace predint::numkit
