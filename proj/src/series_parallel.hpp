#pragma once

// Two-terminal series-parallel reduction used both to recognize reducible
// acyclic composites and to drive the exact distribution calculus. The
// vertex dag is split: vertex i becomes an edge in(i) -> out(i) carrying the
// vertex payload, and each arc (u, v) becomes a zero-delay edge
// out(u) -> in(v). The split graph reduces to a single source->sink edge
// exactly when the path structure is series-parallel with node-disjoint
// parallel branches.

#include <cstddef>
#include <optional>
#include <vector>

#include "ndsan/network.hpp"

namespace ndsan::detail {

// Payloads are caller-managed ids; kNeutralPayload marks a zero-delay edge.
inline constexpr int kNeutralPayload = -1;

struct SpEdge {
  std::size_t from = 0;
  std::size_t to = 0;
  int payload = kNeutralPayload;
  bool alive = true;
};

// series(a, b): payload of two edges traversed in order (either may be neutral).
// parallel(a, b): payload of two edges with identical endpoints.
// Returns the surviving payload id, or nullopt when the graph is not reducible.
template <class SeriesFn, class ParallelFn>
std::optional<int> reduce_two_terminal(std::size_t vertex_count, std::vector<SpEdge> edges,
                                       std::size_t source, std::size_t sink, SeriesFn&& series,
                                       ParallelFn&& parallel) {
  bool changed = true;
  while (changed) {
    changed = false;

    // Parallel pass: merge any two alive edges with identical endpoints.
    for (std::size_t i = 0; i < edges.size(); ++i) {
      if (!edges[i].alive) continue;
      for (std::size_t j = i + 1; j < edges.size(); ++j) {
        if (!edges[j].alive) continue;
        if (edges[i].from == edges[j].from && edges[i].to == edges[j].to) {
          edges[i].payload = parallel(edges[i].payload, edges[j].payload);
          edges[j].alive = false;
          changed = true;
        }
      }
    }

    // Series pass: splice out interior vertices with one in-edge and one
    // out-edge.
    std::vector<int> in_edge(vertex_count, -2), out_edge(vertex_count, -2);
    for (std::size_t i = 0; i < edges.size(); ++i) {
      if (!edges[i].alive) continue;
      auto note = [&](std::vector<int>& slot, std::size_t v) {
        slot[v] = slot[v] == -2 ? static_cast<int>(i) : -3;  // -3: more than one
      };
      note(out_edge, edges[i].from);
      note(in_edge, edges[i].to);
    }
    for (std::size_t v = 0; v < vertex_count; ++v) {
      if (v == source || v == sink) continue;
      if (in_edge[v] < 0 || out_edge[v] < 0) continue;
      SpEdge& a = edges[static_cast<std::size_t>(in_edge[v])];
      SpEdge& b = edges[static_cast<std::size_t>(out_edge[v])];
      if (!a.alive || !b.alive) continue;
      a.payload = series(a.payload, b.payload);
      a.to = b.to;
      b.alive = false;
      changed = true;
      break;  // degree bookkeeping is stale; rescan
    }
  }

  int remaining = 0;
  int payload = kNeutralPayload;
  for (const SpEdge& e : edges) {
    if (!e.alive) continue;
    ++remaining;
    if (e.from != source || e.to != sink) return std::nullopt;
    payload = e.payload;
  }
  if (remaining != 1) return std::nullopt;
  return payload;
}

// Split a vertex dag into the edge graph described above. vertex_payloads[i]
// is the payload of vertex i's own edge.
struct SplitGraph {
  std::size_t vertex_count = 0;
  std::vector<SpEdge> edges;
  std::size_t source = 0;
  std::size_t sink = 0;
};

SplitGraph split_vertices(const Dag& dag, const std::vector<int>& vertex_payloads);

}  // namespace ndsan::detail
