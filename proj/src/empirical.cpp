#include "ndsan/empirical.hpp"

#include <algorithm>
#include <cmath>

#include "ndsan/error.hpp"

namespace ndsan {

EmpiricalDistribution::EmpiricalDistribution(std::vector<double> samples)
    : sorted_(std::move(samples)) {
  if (sorted_.empty()) throw EmptySampleError("empirical distribution needs at least one sample");
  std::sort(sorted_.begin(), sorted_.end());
}

double EmpiricalDistribution::operator()(double x) const {
  const auto it = std::upper_bound(sorted_.begin(), sorted_.end(), x);
  return static_cast<double>(it - sorted_.begin()) / static_cast<double>(sorted_.size());
}

double EmpiricalDistribution::quantile(double p) const {
  const auto n = static_cast<double>(sorted_.size());
  auto rank = static_cast<std::size_t>(std::ceil(p * n));
  rank = std::clamp<std::size_t>(rank, 1, sorted_.size());
  return sorted_[rank - 1];
}

EmpiricalDistribution ecdf(const SampleBatch& batch) { return EmpiricalDistribution(batch.times); }

double ks_statistic(const EmpiricalDistribution& emp,
                    const std::function<double(double)>& reference_cdf) {
  const auto& t = emp.sorted();
  const auto n = static_cast<double>(t.size());
  double sup = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    const double f = reference_cdf(t[i]);
    const double above = static_cast<double>(i + 1) / n;
    const double below = static_cast<double>(i) / n;
    sup = std::max({sup, std::abs(above - f), std::abs(below - f)});
  }
  return sup;
}

double ks_statistic(const EmpiricalDistribution& a, const EmpiricalDistribution& b) {
  const auto& x = a.sorted();
  const auto& y = b.sorted();
  const double nx = static_cast<double>(x.size());
  const double ny = static_cast<double>(y.size());
  double sup = 0.0;
  std::size_t i = 0, j = 0;
  while (i < x.size() || j < y.size()) {
    const double t = (j >= y.size() || (i < x.size() && x[i] <= y[j])) ? x[i] : y[j];
    while (i < x.size() && x[i] <= t) ++i;
    while (j < y.size() && y[j] <= t) ++j;
    sup = std::max(sup, std::abs(static_cast<double>(i) / nx - static_cast<double>(j) / ny));
  }
  return sup;
}

std::vector<HistogramBin> histogram(std::span<const double> samples, double bin_width) {
  if (!(bin_width > 0.0)) throw Error("bin width must be > 0");
  std::vector<HistogramBin> bins;
  if (samples.empty()) return bins;

  auto bin_index = [bin_width](double v) {
    return static_cast<long long>(std::ceil(v / bin_width - 1e-12));
  };
  long long lo = bin_index(samples[0]);
  long long hi = lo;
  for (double v : samples) {
    lo = std::min(lo, bin_index(v));
    hi = std::max(hi, bin_index(v));
  }
  std::vector<std::size_t> counts(static_cast<std::size_t>(hi - lo + 1), 0);
  for (double v : samples) ++counts[static_cast<std::size_t>(bin_index(v) - lo)];

  bins.reserve(counts.size());
  for (std::size_t k = 0; k < counts.size(); ++k)
    bins.push_back({static_cast<double>(lo + static_cast<long long>(k)) * bin_width, counts[k]});
  return bins;
}

std::vector<HistogramBin> histogram(const SampleBatch& batch, double bin_width) {
  return histogram(std::span<const double>(batch.times), bin_width);
}

DensityEstimate approximate_density(const EmpiricalDistribution& emp, std::size_t delta) {
  const auto& t = emp.sorted();
  const std::size_t n = t.size();
  if (delta < 1 || delta > n - 1) throw Error("delta must be in [1, N - 1]");

  DensityEstimate estimate;
  estimate.step = delta;
  const std::size_t points = n / delta;  // k runs to floor(N/delta) - 1
  for (std::size_t k = 1; k + 1 <= points; ++k) {
    // Order statistics are 1-based t_(1+k*delta); the vector is 0-based.
    const double current = t[k * delta];
    const double previous = t[(k - 1) * delta];
    if (current == previous) {
      ++estimate.skipped;
      continue;
    }
    const double rise = emp(current) - emp(previous);
    estimate.points.emplace_back(current, rise / (current - previous));
  }
  return estimate;
}

}  // namespace ndsan
