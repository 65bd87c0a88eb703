#pragma once

#include <string>
#include <variant>

namespace ndsan {

// Activity duration laws. Every family has nonnegative support.

struct Constant {
  double value = 0.0;
};

// Piecewise-linear density on [low, high] peaking at mode, height 2/(high-low).
struct Triangular {
  double low = 0.0;
  double mode = 0.0;
  double high = 0.0;
};

// Normal(mean, variance) restricted to [mean - 3*sd, mean + 3*sd] and
// renormalized. Parameters with mean - 3*sd < 0 are invalid.
struct TruncatedNormal {
  double mean = 0.0;
  double variance = 0.0;
};

struct Uniform {
  double low = 0.0;
  double high = 0.0;
};

struct Exponential {
  double rate = 0.0;
};

using Duration =
    std::variant<Constant, Triangular, TruncatedNormal, Uniform, Exponential>;

// Empty string when the parameters satisfy the family's constraints,
// otherwise a human-readable reason.
std::string invalid_reason(const Duration& d);

std::string family_name(const Duration& d);

double support_min(const Duration& d);

// Upper end of the support. Exponential has unbounded support; its bound is
// taken at the 1 - 1e-9 quantile so grids can cover all but negligible mass.
double support_max(const Duration& d);

double cdf(const Duration& d, double t);

double mean(const Duration& d);

// Inverse cdf for the closed-form families (constant, triangular, uniform,
// exponential). Throws Error for TruncatedNormal, which is sampled by
// rejection instead.
double quantile(const Duration& d, double u);

namespace detail {
template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;
}  // namespace detail

}  // namespace ndsan
