#include "ndsan/network.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "ndsan/error.hpp"
#include "series_parallel.hpp"

namespace ndsan {

namespace {

void check_arc_range(const Dag& dag) {
  for (const auto& [u, v] : dag.arcs)
    if (u >= dag.vertex_count || v >= dag.vertex_count)
      throw Error("arc references a vertex out of range");
}

}  // namespace

std::vector<std::size_t> topological_order(const Dag& dag) {
  check_arc_range(dag);
  std::vector<std::size_t> indegree(dag.vertex_count, 0);
  std::vector<std::vector<std::size_t>> out(dag.vertex_count);
  for (const auto& [u, v] : dag.arcs) {
    out[u].push_back(v);
    ++indegree[v];
  }
  std::vector<std::size_t> order;
  order.reserve(dag.vertex_count);
  std::vector<std::size_t> ready;
  for (std::size_t v = 0; v < dag.vertex_count; ++v)
    if (indegree[v] == 0) ready.push_back(v);
  while (!ready.empty()) {
    // Smallest index first keeps the order deterministic.
    auto it = std::min_element(ready.begin(), ready.end());
    const std::size_t v = *it;
    ready.erase(it);
    order.push_back(v);
    for (std::size_t w : out[v])
      if (--indegree[w] == 0) ready.push_back(w);
  }
  if (order.size() != dag.vertex_count) throw CyclicGraphError("precedence graph contains a cycle");
  return order;
}

namespace {

std::vector<std::size_t> find_sources(const Dag& dag) {
  check_arc_range(dag);
  std::vector<bool> has_in(dag.vertex_count, false);
  for (const auto& arc : dag.arcs) has_in[arc.second] = true;
  std::vector<std::size_t> sources;
  for (std::size_t v = 0; v < dag.vertex_count; ++v)
    if (!has_in[v]) sources.push_back(v);
  return sources;
}

std::vector<std::size_t> find_sinks(const Dag& dag) {
  check_arc_range(dag);
  std::vector<bool> has_out(dag.vertex_count, false);
  for (const auto& arc : dag.arcs) has_out[arc.first] = true;
  std::vector<std::size_t> sinks;
  for (std::size_t v = 0; v < dag.vertex_count; ++v)
    if (!has_out[v]) sinks.push_back(v);
  return sinks;
}

}  // namespace

std::size_t single_source(const Dag& dag) {
  const auto sources = find_sources(dag);
  if (sources.size() != 1)
    throw MultipleSourcesOrSinksError("precedence graph must have exactly one source vertex");
  return sources.front();
}

std::size_t single_sink(const Dag& dag) {
  const auto sinks = find_sinks(dag);
  if (sinks.size() != 1)
    throw MultipleSourcesOrSinksError("precedence graph must have exactly one sink vertex");
  return sinks.front();
}

NodePtr make_trivial(std::string name, Duration duration) {
  return std::make_shared<Node>(Node{Trivial{std::move(name), duration}});
}

NodePtr make_acyclic(Dag dag, std::vector<NodePtr> children) {
  return std::make_shared<Node>(Node{Acyclic{std::move(dag), std::move(children)}});
}

NodePtr make_series(std::vector<NodePtr> children) {
  Dag dag;
  dag.vertex_count = children.size();
  for (std::size_t v = 0; v + 1 < children.size(); ++v) dag.arcs.emplace_back(v, v + 1);
  return make_acyclic(std::move(dag), std::move(children));
}

NodePtr make_decision(NodePtr entry, std::vector<DecisionBranch> branches, NodePtr exit) {
  return std::make_shared<Node>(Node{Decision{std::move(entry), std::move(branches), std::move(exit)}});
}

NodePtr make_loop(NodePtr entry, NodePtr body, NodePtr exit, std::vector<double> continue_probs) {
  return std::make_shared<Node>(
      Node{Loop{std::move(entry), std::move(body), std::move(exit), std::move(continue_probs)}});
}

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

void validate_rec(const Node& node, const std::string& path, std::vector<Violation>& out);

void validate_child(const NodePtr& child, const std::string& path, std::vector<Violation>& out) {
  if (!child) {
    out.push_back({path, "missing sub-network"});
    return;
  }
  validate_rec(*child, path, out);
}

void validate_dag(const Acyclic& node, const std::string& path, std::vector<Violation>& out) {
  const Dag& dag = node.dag;
  if (dag.vertex_count == 0) {
    out.push_back({path, "acyclic composite must have at least one vertex"});
    return;
  }
  if (node.children.size() != dag.vertex_count) {
    out.push_back({path, "vertex count " + std::to_string(dag.vertex_count) +
                             " does not match child count " + std::to_string(node.children.size())});
    return;
  }
  std::set<std::pair<std::size_t, std::size_t>> seen;
  for (const auto& [u, v] : dag.arcs) {
    if (u >= dag.vertex_count || v >= dag.vertex_count) {
      out.push_back({path, "arc (" + std::to_string(u) + ", " + std::to_string(v) +
                               ") references a vertex out of range"});
      return;
    }
    if (u == v) {
      out.push_back({path, "self arc at vertex " + std::to_string(u)});
      return;
    }
    if (!seen.insert({u, v}).second) {
      out.push_back({path, "duplicate arc (" + std::to_string(u) + ", " + std::to_string(v) + ")"});
      return;
    }
  }
  try {
    topological_order(dag);
  } catch (const CyclicGraphError&) {
    out.push_back({path, "precedence graph contains a cycle"});
    return;
  }
  if (find_sources(dag).size() != 1) out.push_back({path, "precedence graph must have exactly one source vertex"});
  if (find_sinks(dag).size() != 1) out.push_back({path, "precedence graph must have exactly one sink vertex"});
}

void validate_rec(const Node& node, const std::string& path, std::vector<Violation>& out) {
  using detail::overloaded;
  std::visit(
      overloaded{
          [&](const Trivial& t) {
            if (t.name.empty()) out.push_back({path, "activity name is empty"});
            if (auto reason = invalid_reason(t.duration); !reason.empty())
              out.push_back({path, reason});
          },
          [&](const Acyclic& a) {
            validate_dag(a, path, out);
            for (std::size_t i = 0; i < a.children.size(); ++i)
              validate_child(a.children[i], path + "/children[" + std::to_string(i) + "]", out);
          },
          [&](const Decision& d) {
            if (d.branches.size() < 2)
              out.push_back({path, "decision must have at least 2 branches"});
            double sum = 0.0;
            for (std::size_t i = 0; i < d.branches.size(); ++i) {
              const double p = d.branches[i].probability;
              if (!(p > 0.0 && p <= 1.0))
                out.push_back({path + "/branches[" + std::to_string(i) + "]",
                               "branch probability " + fmt(p) + " must be in (0, 1]"});
              sum += p;
            }
            if (!d.branches.empty() && std::abs(sum - 1.0) > kProbabilitySumTolerance)
              out.push_back({path, "branch probabilities sum to " + fmt(sum) + ", expected 1"});
            validate_child(d.entry, path + "/entry", out);
            for (std::size_t i = 0; i < d.branches.size(); ++i)
              validate_child(d.branches[i].child, path + "/branches[" + std::to_string(i) + "]", out);
            validate_child(d.exit, path + "/exit", out);
          },
          [&](const Loop& l) {
            if (l.continue_probs.empty()) {
              out.push_back({path, "loop must carry at least one continue probability"});
            } else {
              for (std::size_t i = 0; i < l.continue_probs.size(); ++i) {
                const double q = l.continue_probs[i];
                if (!(q >= 0.0 && q <= 1.0))
                  out.push_back({path, "continue probability " + fmt(q) + " at position " +
                                           std::to_string(i) + " must be in [0, 1]"});
              }
              if (l.continue_probs.back() != 0.0)
                out.push_back({path, "last loop probability must be 0"});
            }
            validate_child(l.entry, path + "/entry", out);
            validate_child(l.body, path + "/body", out);
            validate_child(l.exit, path + "/exit", out);
          },
      },
      node.value);
}

}  // namespace

ValidationReport validate(const Node& net) {
  ValidationReport report;
  validate_rec(net, "root", report.violations);
  return report;
}

std::size_t activity_count(const Node& net) {
  using detail::overloaded;
  return std::visit(
      overloaded{
          [](const Trivial&) -> std::size_t { return 1; },
          [](const Acyclic& a) {
            std::size_t n = 0;
            for (const auto& c : a.children) n += activity_count(*c);
            return n;
          },
          [](const Decision& d) {
            std::size_t n = activity_count(*d.entry) + activity_count(*d.exit);
            for (const auto& b : d.branches) n += activity_count(*b.child);
            return n;
          },
          [](const Loop& l) {
            return activity_count(*l.entry) + activity_count(*l.body) + activity_count(*l.exit);
          },
      },
      net.value);
}

namespace detail {

SplitGraph split_vertices(const Dag& dag, const std::vector<int>& vertex_payloads) {
  SplitGraph g;
  g.vertex_count = 2 * dag.vertex_count;
  for (std::size_t v = 0; v < dag.vertex_count; ++v)
    g.edges.push_back({2 * v, 2 * v + 1, vertex_payloads[v], true});
  for (const auto& [u, v] : dag.arcs) g.edges.push_back({2 * u + 1, 2 * v, kNeutralPayload, true});
  g.source = 2 * single_source(dag);
  g.sink = 2 * single_sink(dag) + 1;
  return g;
}

}  // namespace detail

namespace {

bool dag_is_reducible(const Dag& dag) {
  auto g = detail::split_vertices(dag, std::vector<int>(dag.vertex_count, detail::kNeutralPayload));
  auto result = detail::reduce_two_terminal(
      g.vertex_count, std::move(g.edges), g.source, g.sink,
      [](int, int) { return detail::kNeutralPayload; },
      [](int, int) { return detail::kNeutralPayload; });
  return result.has_value();
}

}  // namespace

bool is_series_parallel_reducible(const Node& net) {
  using detail::overloaded;
  return std::visit(
      overloaded{
          [](const Trivial&) { return true; },
          [](const Acyclic& a) {
            if (!dag_is_reducible(a.dag)) return false;
            for (const auto& c : a.children)
              if (!is_series_parallel_reducible(*c)) return false;
            return true;
          },
          [](const Decision& d) {
            if (!is_series_parallel_reducible(*d.entry)) return false;
            for (const auto& b : d.branches)
              if (!is_series_parallel_reducible(*b.child)) return false;
            return is_series_parallel_reducible(*d.exit);
          },
          [](const Loop& l) {
            return is_series_parallel_reducible(*l.entry) && is_series_parallel_reducible(*l.body) &&
                   is_series_parallel_reducible(*l.exit);
          },
      },
      net.value);
}

bool structurally_equal(const Node& a, const Node& b) {
  if (a.value.index() != b.value.index()) return false;
  using detail::overloaded;
  return std::visit(
      overloaded{
          [&](const Trivial& x) {
            const auto& y = std::get<Trivial>(b.value);
            if (x.name != y.name) return false;
            if (x.duration.index() != y.duration.index()) return false;
            return std::visit(
                overloaded{
                    [&](const Constant& p) { return p.value == std::get<Constant>(y.duration).value; },
                    [&](const Triangular& p) {
                      const auto& q = std::get<Triangular>(y.duration);
                      return p.low == q.low && p.mode == q.mode && p.high == q.high;
                    },
                    [&](const TruncatedNormal& p) {
                      const auto& q = std::get<TruncatedNormal>(y.duration);
                      return p.mean == q.mean && p.variance == q.variance;
                    },
                    [&](const Uniform& p) {
                      const auto& q = std::get<Uniform>(y.duration);
                      return p.low == q.low && p.high == q.high;
                    },
                    [&](const Exponential& p) { return p.rate == std::get<Exponential>(y.duration).rate; },
                },
                x.duration);
          },
          [&](const Acyclic& x) {
            const auto& y = std::get<Acyclic>(b.value);
            if (x.dag.vertex_count != y.dag.vertex_count || x.dag.arcs != y.dag.arcs) return false;
            if (x.children.size() != y.children.size()) return false;
            for (std::size_t i = 0; i < x.children.size(); ++i)
              if (!structurally_equal(*x.children[i], *y.children[i])) return false;
            return true;
          },
          [&](const Decision& x) {
            const auto& y = std::get<Decision>(b.value);
            if (x.branches.size() != y.branches.size()) return false;
            if (!structurally_equal(*x.entry, *y.entry) || !structurally_equal(*x.exit, *y.exit))
              return false;
            for (std::size_t i = 0; i < x.branches.size(); ++i) {
              if (x.branches[i].probability != y.branches[i].probability) return false;
              if (!structurally_equal(*x.branches[i].child, *y.branches[i].child)) return false;
            }
            return true;
          },
          [&](const Loop& x) {
            const auto& y = std::get<Loop>(b.value);
            return x.continue_probs == y.continue_probs && structurally_equal(*x.entry, *y.entry) &&
                   structurally_equal(*x.body, *y.body) && structurally_equal(*x.exit, *y.exit);
          },
      },
      a.value);
}

}  // namespace ndsan
