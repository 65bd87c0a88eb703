#include "ndsan/duration.hpp"

#include <cmath>
#include <sstream>

#include "ndsan/error.hpp"

namespace ndsan {

namespace {

double standard_normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

// Mass of the untruncated normal inside the +-3 sigma window.
const double kThreeSigmaMass = standard_normal_cdf(3.0) - standard_normal_cdf(-3.0);

}  // namespace

std::string invalid_reason(const Duration& d) {
  using detail::overloaded;
  return std::visit(
      overloaded{
          [](const Constant& c) -> std::string {
            if (!(c.value >= 0.0)) return "constant value must be >= 0";
            return {};
          },
          [](const Triangular& t) -> std::string {
            if (!(t.low < t.mode && t.mode < t.high))
              return "triangular parameters must satisfy low < mode < high";
            if (!(t.low >= 0.0)) return "triangular low must be >= 0";
            return {};
          },
          [](const TruncatedNormal& n) -> std::string {
            if (!(n.variance > 0.0)) return "truncated normal variance must be > 0";
            if (n.mean - 3.0 * std::sqrt(n.variance) < 0.0)
              return "truncated normal support must be nonnegative (mean - 3*sd >= 0)";
            return {};
          },
          [](const Uniform& u) -> std::string {
            if (!(u.low >= 0.0)) return "uniform low must be >= 0";
            if (!(u.low < u.high)) return "uniform parameters must satisfy low < high";
            return {};
          },
          [](const Exponential& e) -> std::string {
            if (!(e.rate > 0.0)) return "exponential rate must be > 0";
            return {};
          },
      },
      d);
}

std::string family_name(const Duration& d) {
  using detail::overloaded;
  return std::visit(overloaded{[](const Constant&) { return std::string("constant"); },
                               [](const Triangular&) { return std::string("triangular"); },
                               [](const TruncatedNormal&) { return std::string("truncated_normal"); },
                               [](const Uniform&) { return std::string("uniform"); },
                               [](const Exponential&) { return std::string("exponential"); }},
                    d);
}

double support_min(const Duration& d) {
  using detail::overloaded;
  return std::visit(
      overloaded{[](const Constant& c) { return c.value; },
                 [](const Triangular& t) { return t.low; },
                 [](const TruncatedNormal& n) { return n.mean - 3.0 * std::sqrt(n.variance); },
                 [](const Uniform& u) { return u.low; },
                 [](const Exponential&) { return 0.0; }},
      d);
}

double support_max(const Duration& d) {
  using detail::overloaded;
  return std::visit(
      overloaded{[](const Constant& c) { return c.value; },
                 [](const Triangular& t) { return t.high; },
                 [](const TruncatedNormal& n) { return n.mean + 3.0 * std::sqrt(n.variance); },
                 [](const Uniform& u) { return u.high; },
                 [](const Exponential& e) {
                   return -std::log(1e-9) / e.rate;  // 1 - 1e-9 quantile
                 }},
      d);
}

double cdf(const Duration& d, double t) {
  using detail::overloaded;
  return std::visit(
      overloaded{
          [&](const Constant& c) { return t >= c.value ? 1.0 : 0.0; },
          [&](const Triangular& tri) {
            if (t <= tri.low) return 0.0;
            if (t >= tri.high) return 1.0;
            const double span = tri.high - tri.low;
            if (t < tri.mode) {
              const double x = t - tri.low;
              return x * x / (span * (tri.mode - tri.low));
            }
            const double x = tri.high - t;
            return 1.0 - x * x / (span * (tri.high - tri.mode));
          },
          [&](const TruncatedNormal& n) {
            const double sd = std::sqrt(n.variance);
            const double z = (t - n.mean) / sd;
            if (z <= -3.0) return 0.0;
            if (z >= 3.0) return 1.0;
            return (standard_normal_cdf(z) - standard_normal_cdf(-3.0)) / kThreeSigmaMass;
          },
          [&](const Uniform& u) {
            if (t <= u.low) return 0.0;
            if (t >= u.high) return 1.0;
            return (t - u.low) / (u.high - u.low);
          },
          [&](const Exponential& e) { return t <= 0.0 ? 0.0 : -std::expm1(-e.rate * t); },
      },
      d);
}

double mean(const Duration& d) {
  using detail::overloaded;
  return std::visit(
      overloaded{[](const Constant& c) { return c.value; },
                 [](const Triangular& t) { return (t.low + t.mode + t.high) / 3.0; },
                 [](const TruncatedNormal& n) { return n.mean; },  // symmetric truncation
                 [](const Uniform& u) { return (u.low + u.high) / 2.0; },
                 [](const Exponential& e) { return 1.0 / e.rate; }},
      d);
}

double quantile(const Duration& d, double u) {
  using detail::overloaded;
  return std::visit(
      overloaded{
          [&](const Constant& c) { return c.value; },
          [&](const Triangular& t) {
            const double span = t.high - t.low;
            const double cut = (t.mode - t.low) / span;
            if (u < cut) return t.low + std::sqrt(u * span * (t.mode - t.low));
            return t.high - std::sqrt((1.0 - u) * span * (t.high - t.mode));
          },
          [&](const TruncatedNormal&) -> double {
            throw Error("truncated normal has no closed-form quantile");
          },
          [&](const Uniform& uni) { return uni.low + (uni.high - uni.low) * u; },
          [&](const Exponential& e) { return -std::log1p(-u) / e.rate; },
      },
      d);
}

}  // namespace ndsan
