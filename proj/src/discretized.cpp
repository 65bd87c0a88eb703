#include "ndsan/discretized.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "ndsan/error.hpp"
#include "ndsan/sampler.hpp"
#include "series_parallel.hpp"

namespace ndsan {

namespace {

constexpr double kStepTolerance = 1e-12;

void check_same_step(double a, double b) {
  if (std::abs(a - b) > kStepTolerance * std::max(a, b))
    throw GridMismatchError("grid steps differ");
}

std::vector<std::pair<std::size_t, double>> sorted_atoms(
    std::map<std::size_t, double>&& collected) {
  std::vector<std::pair<std::size_t, double>> atoms;
  atoms.reserve(collected.size());
  for (auto& [k, m] : collected)
    if (m > 0.0) atoms.emplace_back(k, m);
  return atoms;
}

}  // namespace

DiscretizedDistribution::DiscretizedDistribution(double step, std::vector<double> mass,
                                                 std::vector<std::pair<std::size_t, double>> atoms)
    : step_(step), mass_(std::move(mass)), atoms_(std::move(atoms)) {
  if (!(step_ > 0.0)) throw Error("grid step must be > 0");
  if (mass_.empty()) throw Error("mass vector is empty");
  std::sort(atoms_.begin(), atoms_.end());
  if (!atoms_.empty() && atoms_.back().first >= mass_.size())
    throw Error("atom index beyond the grid");
  cdf_.resize(mass_.size());
  double running = 0.0;
  for (std::size_t k = 0; k < mass_.size(); ++k) {
    running += mass_[k];
    cdf_[k] = running;
  }
}

DiscretizedDistribution DiscretizedDistribution::point_mass(double step, double value) {
  if (!(step > 0.0) || value < 0.0) throw Error("point mass needs step > 0 and value >= 0");
  const auto k = static_cast<std::size_t>(std::llround(value / step));
  std::vector<double> mass(k + 1, 0.0);
  mass[k] = 1.0;
  return DiscretizedDistribution(step, std::move(mass), {{k, 1.0}});
}

double DiscretizedDistribution::cdf_at(double t) const {
  if (t < 0.0) return 0.0;
  const double x = t / step_;
  const auto k = static_cast<std::size_t>(x);
  if (k + 1 >= cdf_.size()) return std::min(cdf_.back(), 1.0);
  const double lo = cdf_[k];
  const double hi = cdf_[k + 1];
  return std::min(lo + (hi - lo) * (x - static_cast<double>(k)), 1.0);
}

std::vector<double> DiscretizedDistribution::pdf() const {
  // Continuous part of the cdf: subtract the atom jumps.
  std::vector<double> smooth = cdf_;
  double jump = 0.0;
  std::size_t next = 0;
  for (std::size_t k = 0; k < smooth.size(); ++k) {
    while (next < atoms_.size() && atoms_[next].first == k) jump += atoms_[next++].second;
    smooth[k] -= jump;
  }

  const std::size_t n = smooth.size();
  std::vector<double> density(n, 0.0);
  if (n == 1) {
    density[0] = 0.0;
  } else {
    density[0] = (smooth[1] - smooth[0]) / step_;
    for (std::size_t k = 1; k + 1 < n; ++k) density[k] = (smooth[k + 1] - smooth[k - 1]) / (2.0 * step_);
    density[n - 1] = (smooth[n - 1] - smooth[n - 2]) / step_;
  }
  for (const auto& [k, m] : atoms_) density[k] += m / step_;
  return density;
}

double DiscretizedDistribution::total_mass() const { return cdf_.back(); }

double DiscretizedDistribution::mean() const {
  double m = 0.0;
  for (std::size_t k = 0; k < mass_.size(); ++k) m += grid_time(k) * mass_[k];
  return m;
}

DiscretizedDistribution discretize(const Duration& d, double step, double t_max) {
  if (!(step > 0.0)) throw Error("grid step must be > 0");
  const double hi = support_max(d);
  if (hi > t_max + step * 0.5)
    throw SupportExceedsGridError(family_name(d) + " support reaches " + std::to_string(hi) +
                                  ", beyond the grid limit " + std::to_string(t_max));

  if (const auto* c = std::get_if<Constant>(&d))
    return DiscretizedDistribution::point_mass(step, c->value);

  const auto last = static_cast<std::size_t>(std::ceil(hi / step)) + 1;
  std::vector<double> mass(last + 1, 0.0);
  double below = 0.0;  // F(t_k - step/2) from the previous iteration
  for (std::size_t k = 0; k <= last; ++k) {
    const double above = cdf(d, (static_cast<double>(k) + 0.5) * step);
    mass[k] = above - below;
    below = above;
  }
  return DiscretizedDistribution(step, std::move(mass));
}

DiscretizedDistribution convolve(const DiscretizedDistribution& f, const DiscretizedDistribution& g) {
  check_same_step(f.step(), g.step());
  const auto& a = f.masses();
  const auto& b = g.masses();
  std::vector<double> out(a.size() + b.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0.0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  }
  std::map<std::size_t, double> atoms;
  for (const auto& [i, p] : f.atoms())
    for (const auto& [j, q] : g.atoms()) atoms[i + j] += p * q;
  return DiscretizedDistribution(f.step(), std::move(out), sorted_atoms(std::move(atoms)));
}

DiscretizedDistribution mixture(std::span<const double> weights,
                                std::span<const DiscretizedDistribution> parts) {
  if (weights.size() != parts.size() || parts.empty())
    throw WeightSumError("mixture needs one weight per part");
  double sum = 0.0;
  for (double w : weights) {
    if (w < 0.0) throw WeightSumError("mixture weights must be nonnegative");
    sum += w;
  }
  if (std::abs(sum - 1.0) > kProbabilitySumTolerance) {
    std::ostringstream os;
    os << "mixture weights sum to " << sum << ", expected 1";
    throw WeightSumError(os.str());
  }

  const double step = parts[0].step();
  std::size_t n = 0;
  for (const auto& p : parts) {
    check_same_step(step, p.step());
    n = std::max(n, p.size());
  }
  std::vector<double> mass(n, 0.0);
  std::map<std::size_t, double> atoms;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    for (std::size_t k = 0; k < parts[i].size(); ++k) mass[k] += weights[i] * parts[i].mass_at(k);
    for (const auto& [k, m] : parts[i].atoms()) atoms[k] += weights[i] * m;
  }
  return DiscretizedDistribution(step, std::move(mass), sorted_atoms(std::move(atoms)));
}

DiscretizedDistribution max_independent(std::span<const DiscretizedDistribution> parts) {
  if (parts.empty()) throw Error("max_independent needs at least one part");
  const double step = parts[0].step();
  std::size_t n = 0;
  for (const auto& p : parts) {
    check_same_step(step, p.step());
    n = std::max(n, p.size());
  }

  auto cdf_padded = [](const DiscretizedDistribution& p, std::size_t k) {
    return k < p.size() ? p.cdf()[k] : p.cdf().back();
  };
  auto atom_at = [](const DiscretizedDistribution& p, std::size_t k) {
    for (const auto& [i, m] : p.atoms())
      if (i == k) return m;
    return 0.0;
  };

  std::vector<double> mass(n, 0.0);
  std::map<std::size_t, double> atoms;
  double previous = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    double product = 1.0;
    double product_without_jumps = 1.0;
    for (const auto& p : parts) {
      const double c = cdf_padded(p, k);
      product *= c;
      product_without_jumps *= c - atom_at(p, k);
    }
    mass[k] = product - previous;
    const double atom = product - product_without_jumps;
    if (atom > 0.0) atoms[k] += std::min(atom, mass[k]);
    previous = product;
  }
  return DiscretizedDistribution(step, std::move(mass), sorted_atoms(std::move(atoms)));
}

DiscretizedDistribution loop_mixture(const DiscretizedDistribution& body,
                                     std::span<const double> continue_probs) {
  if (continue_probs.empty()) throw InvalidLoopProbsError("loop needs at least one probability");
  for (double q : continue_probs)
    if (!(q >= 0.0 && q <= 1.0)) throw InvalidLoopProbsError("loop probabilities must be in [0, 1]");
  if (continue_probs.back() != 0.0) throw InvalidLoopProbsError("last loop probability must be 0");

  // weight(k) = q_1...q_k * (1 - q_{k+1}); computed as differences of the
  // running products so the weights telescope to exactly 1.
  std::vector<double> weights;
  weights.reserve(continue_probs.size());
  double product = 1.0;
  for (double q : continue_probs) {
    const double next = product * q;
    weights.push_back(product - next);
    product = next;
  }

  std::vector<DiscretizedDistribution> executions;
  executions.reserve(weights.size());
  executions.push_back(DiscretizedDistribution::point_mass(body.step(), 0.0));
  for (std::size_t k = 1; k < weights.size(); ++k)
    executions.push_back(convolve(executions.back(), body));
  return mixture(weights, executions);
}

double worst_case_span(const Node& net) {
  using detail::overloaded;
  return std::visit(
      overloaded{
          [](const Trivial& t) { return support_max(t.duration); },
          [](const Acyclic& a) {
            std::vector<double> spans(a.children.size());
            for (std::size_t i = 0; i < a.children.size(); ++i)
              spans[i] = worst_case_span(*a.children[i]);
            return critical_path(a.dag, spans);
          },
          [](const Decision& d) {
            double branch = 0.0;
            for (const auto& b : d.branches) branch = std::max(branch, worst_case_span(*b.child));
            return worst_case_span(*d.entry) + branch + worst_case_span(*d.exit);
          },
          [](const Loop& l) {
            const double repeats = static_cast<double>(l.continue_probs.size()) - 1.0;
            return worst_case_span(*l.entry) + repeats * worst_case_span(*l.body) +
                   worst_case_span(*l.exit);
          },
      },
      net.value);
}

namespace {

DiscretizedDistribution analyze_rec(const Node& net, double step);

DiscretizedDistribution analyze_acyclic(const Acyclic& node, double step) {
  std::vector<DiscretizedDistribution> store;
  store.reserve(node.children.size());
  std::vector<int> payloads(node.children.size());
  for (std::size_t i = 0; i < node.children.size(); ++i) {
    store.push_back(analyze_rec(*node.children[i], step));
    payloads[i] = static_cast<int>(i);
  }

  auto series = [&store](int a, int b) {
    if (a == detail::kNeutralPayload) return b;
    if (b == detail::kNeutralPayload) return a;
    store.push_back(convolve(store[static_cast<std::size_t>(a)], store[static_cast<std::size_t>(b)]));
    return static_cast<int>(store.size() - 1);
  };
  auto parallel = [&store](int a, int b) {
    // A zero-delay edge in parallel with a nonnegative variable is absorbed:
    // max(0, X) = X.
    if (a == detail::kNeutralPayload) return b;
    if (b == detail::kNeutralPayload) return a;
    const DiscretizedDistribution pair[] = {store[static_cast<std::size_t>(a)],
                                            store[static_cast<std::size_t>(b)]};
    store.push_back(max_independent(pair));
    return static_cast<int>(store.size() - 1);
  };

  auto g = detail::split_vertices(node.dag, payloads);
  auto result = detail::reduce_two_terminal(g.vertex_count, std::move(g.edges), g.source, g.sink,
                                            series, parallel);
  if (!result)
    throw NotReducibleError(
        "acyclic composite has source->sink paths sharing internal vertices; the exact calculus "
        "does not apply, use simulation instead");
  if (*result == detail::kNeutralPayload) return DiscretizedDistribution::point_mass(step, 0.0);
  return store[static_cast<std::size_t>(*result)];
}

DiscretizedDistribution analyze_rec(const Node& net, double step) {
  using detail::overloaded;
  return std::visit(
      overloaded{
          [&](const Trivial& t) { return discretize(t.duration, step, support_max(t.duration)); },
          [&](const Acyclic& a) { return analyze_acyclic(a, step); },
          [&](const Decision& d) {
            std::vector<double> weights;
            std::vector<DiscretizedDistribution> parts;
            weights.reserve(d.branches.size());
            parts.reserve(d.branches.size());
            for (const auto& b : d.branches) {
              weights.push_back(b.probability);
              parts.push_back(analyze_rec(*b.child, step));
            }
            return convolve(convolve(analyze_rec(*d.entry, step), mixture(weights, parts)),
                            analyze_rec(*d.exit, step));
          },
          [&](const Loop& l) {
            return convolve(
                convolve(analyze_rec(*l.entry, step), loop_mixture(analyze_rec(*l.body, step), l.continue_probs)),
                analyze_rec(*l.exit, step));
          },
      },
      net.value);
}

}  // namespace

DiscretizedDistribution analyze(const Node& net, double step, double t_max) {
  if (auto report = validate(net); !report.ok())
    throw ValidationError("network is invalid: " + report.violations.front().path + ": " +
                          report.violations.front().message);
  const double span = worst_case_span(net);
  if (span > t_max + step * 0.5)
    throw SupportExceedsGridError("network worst-case span " + std::to_string(span) +
                                  " exceeds the grid limit " + std::to_string(t_max));
  return analyze_rec(net, step);
}

DiscretizedDistribution analyze(const Node& net, double step) {
  if (auto report = validate(net); !report.ok())
    throw ValidationError("network is invalid: " + report.violations.front().path + ": " +
                          report.violations.front().message);
  return analyze_rec(net, step);
}

}  // namespace ndsan
