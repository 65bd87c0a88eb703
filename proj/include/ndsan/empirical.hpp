#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "ndsan/sampler.hpp"

namespace ndsan {

// Sorted sample with step-function evaluation F(x) = |{t_i <= x}| / N.
class EmpiricalDistribution {
 public:
  // Sorts a copy; throws EmptySampleError on an empty sample.
  explicit EmpiricalDistribution(std::vector<double> samples);

  std::size_t count() const { return sorted_.size(); }
  const std::vector<double>& sorted() const { return sorted_; }

  double operator()(double x) const;

  // Order statistic t_ceil(p*N), p in (0, 1].
  double quantile(double p) const;

 private:
  std::vector<double> sorted_;
};

EmpiricalDistribution ecdf(const SampleBatch& batch);

// Supremum distance between the sample's step function and a continuous
// nondecreasing reference cdf: max over i of
// max(|i/N - F(t_i)|, |(i-1)/N - F(t_i)|).
double ks_statistic(const EmpiricalDistribution& emp,
                    const std::function<double(double)>& reference_cdf);

// Two-sample variant: supremum of |F_a - F_b| over all jump points.
double ks_statistic(const EmpiricalDistribution& a, const EmpiricalDistribution& b);

// Bins are half-open intervals (b - width, b] labeled by their right edge
// b = k * width. Interior empty bins are emitted with count 0; counts sum
// to the sample size.
struct HistogramBin {
  double right_edge = 0.0;
  std::size_t count = 0;
};
std::vector<HistogramBin> histogram(std::span<const double> samples, double bin_width);
std::vector<HistogramBin> histogram(const SampleBatch& batch, double bin_width);

// Difference quotients of the empirical cdf over order statistics delta
// apart: a density point at t_(1+k*delta) for k = 1..floor(N/delta)-1.
// Points with tied abscissae are skipped and counted, never divided by zero.
struct DensityEstimate {
  std::size_t step = 0;
  std::vector<std::pair<double, double>> points;  // (abscissa, density)
  std::size_t skipped = 0;
};
DensityEstimate approximate_density(const EmpiricalDistribution& emp, std::size_t delta = 25);

}  // namespace ndsan
