#include "ndsan/ks_planning.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ndsan/error.hpp"

namespace ndsan {

namespace {

constexpr double kEpsilons[4] = {0.20, 0.10, 0.05, 0.01};
constexpr std::size_t kTabulatedN[5] = {10, 20, 30, 40, 50};
constexpr double kTable[5][4] = {
    {0.32, 0.37, 0.41, 0.49},
    {0.23, 0.26, 0.29, 0.36},
    {0.19, 0.22, 0.24, 0.29},
    {0.17, 0.19, 0.21, 0.25},
    {0.15, 0.17, 0.19, 0.23},
};
constexpr double kAsymptoticCoefficient[4] = {1.07, 1.22, 1.36, 1.63};

std::size_t epsilon_column(double epsilon) {
  for (std::size_t c = 0; c < 4; ++c)
    if (std::abs(epsilon - kEpsilons[c]) <= 1e-9) return c;
  std::ostringstream os;
  os << "epsilon " << epsilon << " is not tabulated; use one of 0.20, 0.10, 0.05, 0.01";
  throw UnsupportedEpsilonError(os.str());
}

}  // namespace

double ks_critical_value(std::size_t n, double epsilon) {
  if (n < 1) throw Error("sample size must be >= 1");
  const std::size_t col = epsilon_column(epsilon);
  if (n > kTabulatedN[4])
    return kAsymptoticCoefficient[col] / std::sqrt(static_cast<double>(n));
  std::size_t row = 0;  // n below 10 clamps to the first tabulated row
  for (std::size_t r = 0; r < 5; ++r)
    if (kTabulatedN[r] <= n) row = r;
  return kTable[row][col];
}

KsPlan plan_sample_size(double max_error, double confidence) {
  if (!(max_error > 0.0 && max_error < 1.0)) throw Error("max error must be in (0, 1)");
  const double epsilon = 1.0 - confidence;
  std::size_t col;
  try {
    col = epsilon_column(epsilon);
  } catch (const UnsupportedEpsilonError&) {
    std::ostringstream os;
    os << "confidence " << confidence << " is not tabulated; use one of 0.80, 0.90, 0.95, 0.99";
    throw UnsupportedConfidenceError(os.str());
  }

  KsPlan plan;
  plan.max_error = max_error;
  plan.confidence = confidence;
  plan.epsilon = kEpsilons[col];

  // The critical value is a step function of N below 51, dropping only at
  // tabulated rows, so the smallest qualifying N is either a tabulated row
  // or comes from the asymptotic formula.
  for (std::size_t r = 0; r < 5; ++r) {
    if (kTable[r][col] <= max_error + 1e-12) {
      plan.replications = kTabulatedN[r];
      plan.critical_value = kTable[r][col];
      return plan;
    }
  }
  const double ratio = kAsymptoticCoefficient[col] / max_error;
  const auto n = static_cast<std::size_t>(std::ceil(ratio * ratio - 1e-6));
  plan.replications = std::max<std::size_t>(n, kTabulatedN[4] + 1);
  plan.critical_value = ks_critical_value(plan.replications, plan.epsilon);
  return plan;
}

double ConfidenceBand::lower(double x) const { return std::clamp(empirical(x) - margin, 0.0, 1.0); }

double ConfidenceBand::upper(double x) const { return std::clamp(empirical(x) + margin, 0.0, 1.0); }

ConfidenceBand confidence_band(const EmpiricalDistribution& emp, double epsilon) {
  return ConfidenceBand{emp, ks_critical_value(emp.count(), epsilon)};
}

}  // namespace ndsan
