#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ndsan/network.hpp"
#include "ndsan/rng.hpp"

namespace ndsan {

// Completion-time observations; observation i was produced with
// RngStream(master_seed, i), so a batch is reproducible from (network,
// size, master_seed) alone.
struct SampleBatch {
  std::vector<double> times;
  std::uint64_t master_seed = 0;
  std::string network;
  std::size_t size() const { return times.size(); }
};

// One observation of the given duration law.
double draw(const Duration& d, RngStream& rng);

// Maximum over all source->sink directed paths of the sum of vertex weights.
// O(vertices + arcs) by dynamic programming in topological order.
double critical_path(const Dag& dag, std::span<const double> vertex_weights);

// One observation of the network completion time. The network must validate.
double sample(const Node& net, RngStream& rng);

// N independent observations. Replications may be computed on several
// threads; the result is identical to sequential execution because each
// replication owns its stream.
SampleBatch run_batch(const Node& net, std::size_t replications, std::uint64_t master_seed,
                      unsigned threads = 1, std::string network_name = {});

}  // namespace ndsan
