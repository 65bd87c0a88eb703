#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "ndsan/duration.hpp"

namespace ndsan {

// Precedence digraph over the children of an acyclic composite. Vertices are
// indices 0..vertex_count-1; an arc (u, v) means v starts after u finishes.
struct Dag {
  std::size_t vertex_count = 0;
  std::vector<std::pair<std::size_t, std::size_t>> arcs;
};

// Throws CyclicGraphError when the dag has a cycle.
std::vector<std::size_t> topological_order(const Dag& dag);

// Throw MultipleSourcesOrSinksError when not unique.
std::size_t single_source(const Dag& dag);
std::size_t single_sink(const Dag& dag);

struct Node;
using NodePtr = std::shared_ptr<const Node>;

// A single activity with a stochastic duration.
struct Trivial {
  std::string name;
  Duration duration;
};

// Children substituted into the vertices of a single-source single-sink dag.
struct Acyclic {
  Dag dag;
  std::vector<NodePtr> children;
};

struct DecisionBranch {
  double probability = 0.0;
  NodePtr child;
};

// entry, then exactly one branch chosen by probability, then exit.
struct Decision {
  NodePtr entry;
  std::vector<DecisionBranch> branches;
  NodePtr exit;
};

// entry, then the body repeated a random number of times, then exit.
// continue_probs[k] is the probability of running the body again at the
// (k+1)-th test; the last entry must be exactly 0 so the loop terminates
// after at most continue_probs.size() - 1 body executions.
struct Loop {
  NodePtr entry;
  NodePtr body;
  NodePtr exit;
  std::vector<double> continue_probs;
};

struct Node {
  std::variant<Trivial, Acyclic, Decision, Loop> value;
};

NodePtr make_trivial(std::string name, Duration duration);
NodePtr make_acyclic(Dag dag, std::vector<NodePtr> children);
// Chain of children executed one after another.
NodePtr make_series(std::vector<NodePtr> children);
NodePtr make_decision(NodePtr entry, std::vector<DecisionBranch> branches, NodePtr exit);
NodePtr make_loop(NodePtr entry, NodePtr body, NodePtr exit, std::vector<double> continue_probs);

struct Violation {
  std::string path;  // slash-separated route into the tree, e.g. "root/branches[1]"
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
};

// Total and deterministic; never throws. Violations carry the offending
// subtree's path.
ValidationReport validate(const Node& net);

// Number of activity leaves.
std::size_t activity_count(const Node& net);

// True when every acyclic composite in the tree decomposes into nested
// series/parallel compositions whose parallel branches share no internal
// vertex, so branch completion times are independent and the exact
// distribution calculus applies. Decision and loop composites impose no
// condition of their own.
bool is_series_parallel_reducible(const Node& net);

// Deep comparison, probabilities and parameters to full precision.
bool structurally_equal(const Node& a, const Node& b);

// Probability-vector tolerance used by validation.
inline constexpr double kProbabilitySumTolerance = 1e-9;

}  // namespace ndsan
