#include "ndsan/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <thread>

#include "ndsan/error.hpp"

namespace ndsan {

double draw(const Duration& d, RngStream& rng) {
  if (const auto* n = std::get_if<TruncatedNormal>(&d)) {
    // Rejection against the untruncated normal; the +-3 sigma window keeps
    // 99.73% of proposals, so retries are rare.
    const double sd = std::sqrt(n->variance);
    for (;;) {
      const double u1 = 1.0 - rng.next_unit();  // (0, 1]
      const double u2 = rng.next_unit();
      const double z = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
      if (std::abs(z) <= 3.0) return n->mean + sd * z;
    }
  }
  if (const auto* c = std::get_if<Constant>(&d)) return c->value;
  return quantile(d, rng.next_unit());
}

double critical_path(const Dag& dag, std::span<const double> vertex_weights) {
  if (vertex_weights.size() != dag.vertex_count)
    throw Error("need one weight per vertex");
  single_source(dag);
  const std::size_t sink = single_sink(dag);
  const auto order = topological_order(dag);

  std::vector<std::vector<std::size_t>> in(dag.vertex_count);
  for (const auto& [u, v] : dag.arcs) in[v].push_back(u);

  // In a single-source dag every vertex is reachable from the source, so the
  // longest path ending at the sink is the answer.
  std::vector<double> longest(dag.vertex_count, 0.0);
  for (std::size_t v : order) {
    double best = 0.0;
    for (std::size_t u : in[v]) best = std::max(best, longest[u]);
    longest[v] = best + vertex_weights[v];
  }
  return longest[sink];
}

namespace {

// Pick the number of body executions: k = 0 with probability 1 - q[0],
// k = j with probability q[0]...q[j-1] * (1 - q[j]). The trailing q == 0
// guarantees termination at size - 1. Consumes exactly one uniform.
std::size_t select_loop_count(std::span<const double> continue_probs, RngStream& rng) {
  const double u = rng.next_unit();
  double cumulative = 0.0;
  double product = 1.0;
  for (std::size_t j = 0; j < continue_probs.size(); ++j) {
    cumulative += product * (1.0 - continue_probs[j]);
    if (u < cumulative) return j;
    product *= continue_probs[j];
  }
  return continue_probs.size() - 1;
}

std::size_t select_branch(const std::vector<DecisionBranch>& branches, RngStream& rng) {
  const double u = rng.next_unit();
  double cumulative = 0.0;
  for (std::size_t k = 0; k < branches.size(); ++k) {
    cumulative += branches[k].probability;
    if (u < cumulative) return k;
  }
  return branches.size() - 1;
}

}  // namespace

double sample(const Node& net, RngStream& rng) {
  using detail::overloaded;
  return std::visit(
      overloaded{
          [&](const Trivial& t) { return draw(t.duration, rng); },
          [&](const Acyclic& a) {
            // Each child is sampled exactly once; a child lying on several
            // paths contributes the same value to all of them.
            std::vector<double> weights(a.children.size());
            for (std::size_t i = 0; i < a.children.size(); ++i)
              weights[i] = sample(*a.children[i], rng);
            return critical_path(a.dag, weights);
          },
          [&](const Decision& d) {
            const std::size_t k = select_branch(d.branches, rng);
            return sample(*d.entry, rng) + sample(*d.branches[k].child, rng) + sample(*d.exit, rng);
          },
          [&](const Loop& l) {
            const std::size_t k = select_loop_count(l.continue_probs, rng);
            double total = sample(*l.entry, rng);
            for (std::size_t i = 0; i < k; ++i) total += sample(*l.body, rng);
            return total + sample(*l.exit, rng);
          },
      },
      net.value);
}

SampleBatch run_batch(const Node& net, std::size_t replications, std::uint64_t master_seed,
                      unsigned threads, std::string network_name) {
  SampleBatch batch;
  batch.master_seed = master_seed;
  batch.network = std::move(network_name);
  batch.times.resize(replications);

  auto fill = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      RngStream rng(master_seed, i);
      batch.times[i] = sample(net, rng);
    }
  };

  const std::size_t workers =
      std::min<std::size_t>(std::max(1u, threads), std::max<std::size_t>(replications, 1));
  if (workers <= 1) {
    fill(0, replications);
    return batch;
  }

  std::vector<std::thread> pool;
  pool.reserve(workers);
  const std::size_t chunk = (replications + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t begin = w * chunk;
    const std::size_t end = std::min(replications, begin + chunk);
    if (begin >= end) break;
    pool.emplace_back(fill, begin, end);
  }
  for (auto& t : pool) t.join();
  return batch;
}

}  // namespace ndsan
