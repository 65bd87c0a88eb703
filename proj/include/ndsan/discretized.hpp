#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "ndsan/duration.hpp"
#include "ndsan/network.hpp"

namespace ndsan {

// A probability law tabulated on the uniform grid t_k = k * step, origin 0.
//
// Internally the law is a lattice: mass[k] is the probability carried by
// grid point k. Discretizing a continuous law assigns each point the mass of
// the surrounding half-open cell (t_k - step/2, t_k + step/2], which keeps
// every operation an exact computation on mass vectors -- convolution,
// mixtures and independent maxima conserve total mass to rounding error.
// Point masses (constant durations) occupy a single grid point and are
// tracked separately so the cdf treats them as jumps and the density view
// shows them as mass/step spikes.
class DiscretizedDistribution {
 public:
  DiscretizedDistribution(double step, std::vector<double> mass,
                          std::vector<std::pair<std::size_t, double>> atoms = {});

  // Unit mass at the grid point nearest to value.
  static DiscretizedDistribution point_mass(double step, double value);

  double step() const { return step_; }
  std::size_t size() const { return mass_.size(); }
  double grid_time(std::size_t k) const { return static_cast<double>(k) * step_; }

  double mass_at(std::size_t k) const { return mass_[k]; }
  const std::vector<double>& masses() const { return mass_; }
  const std::vector<std::pair<std::size_t, double>>& atoms() const { return atoms_; }

  // cdf()[k] approximates P(X <= t_k); exact at atoms.
  const std::vector<double>& cdf() const { return cdf_; }
  // Linear interpolation between grid points, clamped to [0, 1].
  double cdf_at(double t) const;

  // Density view: central differences of the continuous part of the cdf
  // (one-sided at the boundaries) plus mass/step spikes at atoms.
  std::vector<double> pdf() const;

  double total_mass() const;
  double mean() const;

 private:
  double step_ = 0.0;
  std::vector<double> mass_;
  std::vector<std::pair<std::size_t, double>> atoms_;  // sorted by index
  std::vector<double> cdf_;
};

// Tabulate a duration law. Throws SupportExceedsGridError when the law's
// support does not fit below t_max.
DiscretizedDistribution discretize(const Duration& d, double step, double t_max);

// Law of the sum of two independent variables. Throws GridMismatchError when
// the steps differ.
DiscretizedDistribution convolve(const DiscretizedDistribution& f, const DiscretizedDistribution& g);

// Pointwise weighted combination; weights must sum to 1 within 1e-9.
DiscretizedDistribution mixture(std::span<const double> weights,
                                std::span<const DiscretizedDistribution> parts);

// Law of the maximum of independent variables: the cdf is the pointwise
// product of the input cdfs.
DiscretizedDistribution max_independent(std::span<const DiscretizedDistribution> parts);

// Law of the total body time of a loop with the given continue
// probabilities: a mixture of k-fold self-convolutions of the body law,
// k = 0..size-1, with telescoping weights that sum to 1 exactly.
DiscretizedDistribution loop_mixture(const DiscretizedDistribution& body,
                                     std::span<const double> continue_probs);

// Largest possible completion time of the network (loops at their maximum
// iteration count, decisions on their longest branch).
double worst_case_span(const Node& net);

// Exact-to-grid completion-time law, by structural recursion: activities are
// discretized, series compositions convolved, node-disjoint parallel
// branches combined by max_independent, decisions and loops by probability
// mixtures. Throws NotReducibleError when an acyclic composite's parallel
// branches share internal vertices (fall back to simulation), and
// SupportExceedsGridError when worst_case_span(net) exceeds t_max.
DiscretizedDistribution analyze(const Node& net, double step, double t_max);
DiscretizedDistribution analyze(const Node& net, double step);

}  // namespace ndsan
