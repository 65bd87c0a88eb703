#pragma once

#include <cstddef>

#include "ndsan/empirical.hpp"

namespace ndsan {

// Replication plan derived from the Kolmogorov-Smirnov statistic: after
// `replications` runs, the empirical cdf lies within `critical_value` of the
// true cdf everywhere, with the requested confidence.
struct KsPlan {
  double max_error = 0.0;
  double confidence = 0.0;
  double epsilon = 0.0;  // 1 - confidence
  std::size_t replications = 0;
  double critical_value = 0.0;
};

// Critical value K such that Pr(sup |F_N - F| <= K) = 1 - epsilon. Tabulated
// for n in {10, 20, 30, 40, 50} and epsilon in {0.20, 0.10, 0.05, 0.01};
// coefficient/sqrt(n) for n > 50; other n <= 50 use the nearest tabulated
// row below (conservative, critical values decrease in n).
double ks_critical_value(std::size_t n, double epsilon);

// Smallest N whose critical value at epsilon = 1 - confidence is <= max_error.
// Throws UnsupportedConfidenceError unless confidence is one of
// {0.80, 0.90, 0.95, 0.99}.
KsPlan plan_sample_size(double max_error, double confidence);

// Confidence band for the unknown cdf: F_N(x) -+ K, clamped to [0, 1].
struct ConfidenceBand {
  EmpiricalDistribution empirical;
  double margin = 0.0;
  double lower(double x) const;
  double upper(double x) const;
};
ConfidenceBand confidence_band(const EmpiricalDistribution& emp, double epsilon);

}  // namespace ndsan
