// Acceptance suite: one independently runnable criterion per id, each
// printing a single PASS/FAIL line. Run with no --criterion to execute all.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "ndsan/discretized.hpp"
#include "ndsan/empirical.hpp"
#include "ndsan/ks_planning.hpp"
#include "ndsan/netspec_io.hpp"
#include "ndsan/sampler.hpp"

namespace {

namespace fs = std::filesystem;
using namespace ndsan;

std::string g_cli_path;
std::string g_networks_dir;

NodePtr constant(const char* name, double v) { return make_trivial(name, Constant{v}); }

// Series stem Triangular(2,4,5) feeding a node-disjoint parallel pair of
// Triangular(1,2,3), closed by a zero-duration milestone.
NodePtr reducible_test_network() {
  Dag dag;
  dag.vertex_count = 4;
  dag.arcs = {{0, 1}, {0, 2}, {1, 3}, {2, 3}};
  return make_acyclic(dag, {make_trivial("stem", Triangular{2, 4, 5}),
                            make_trivial("left", Triangular{1, 2, 3}),
                            make_trivial("right", Triangular{1, 2, 3}), constant("close", 0)});
}

bool criterion_1_planning(std::string& detail) {
  const KsPlan plan = plan_sample_size(0.02, 0.95);
  const bool n_ok = plan.replications == 4624;
  const bool k_ok = std::abs(plan.critical_value - 0.02) <= 1e-12;
  const bool table_ok = ks_critical_value(50, 0.20) == 0.15 && ks_critical_value(10, 0.01) == 0.49;
  std::ostringstream os;
  os << "plan(0.02, 0.95) -> N=" << plan.replications << ", K=" << plan.critical_value
     << "; K(50, 0.20)=" << ks_critical_value(50, 0.20)
     << ", K(10, 0.01)=" << ks_critical_value(10, 0.01);
  detail = os.str();
  return n_ok && k_ok && table_ok;
}

bool criterion_2_loop(std::string& detail) {
  auto net = make_loop(constant("in", 0), constant("body", 2), constant("out", 0), {0.5, 0.2, 0});
  const std::size_t n = 1000000;
  auto batch = run_batch(*net, n, 1618033988u, 2);
  double freq[3] = {0, 0, 0};
  for (double t : batch.times) freq[static_cast<int>(t / 2)] += 1.0 / static_cast<double>(n);
  const double expected[3] = {0.5, 0.4, 0.1};
  bool ok = true;
  for (int k = 0; k < 3; ++k) ok = ok && std::abs(freq[k] - expected[k]) <= 0.005;
  std::ostringstream os;
  os << "outcome frequencies {0: " << freq[0] << ", 2: " << freq[1] << ", 4: " << freq[2]
     << "}, target {0.5, 0.4, 0.1} within 0.005";
  detail = os.str();
  return ok;
}

bool criterion_3_decision(std::string& detail) {
  auto net = make_decision(constant("in", 1),
                           {{0.55, constant("accept", 10)}, {0.45, constant("reject", 20)}},
                           constant("out", 1));
  const std::size_t n = 1000000;
  auto batch = run_batch(*net, n, 2718281828u, 2);
  std::size_t fast = 0;
  for (double t : batch.times) {
    if (t != 12.0 && t != 22.0) {
      detail = "observed a completion time outside {12, 22}";
      return false;
    }
    if (t == 12.0) ++fast;
  }
  const double share = static_cast<double>(fast) / static_cast<double>(n);
  std::ostringstream os;
  os << "branch frequencies " << share << "/" << 1.0 - share << ", target 0.55/0.45 within 0.005";
  detail = os.str();
  return std::abs(share - 0.55) <= 0.005 && std::abs((1.0 - share) - 0.45) <= 0.005;
}

bool criterion_4_oracle_equivalence(std::string& detail) {
  auto net = reducible_test_network();
  const double step = 0.0025;
  const auto oracle = analyze(*net, step);
  const std::size_t n = 100000;
  const double bound = 1.63 / std::sqrt(static_cast<double>(n)) + 0.005;

  int passed = 0;
  double worst = 0.0;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    auto batch = run_batch(*net, n, seed, 2);
    auto emp = ecdf(batch);
    const double distance = ks_statistic(emp, [&](double x) { return oracle.cdf_at(x); });
    worst = std::max(worst, distance);
    if (distance <= bound) ++passed;
  }
  std::ostringstream os;
  os << passed << "/100 seeds with KS <= " << bound << " (worst " << worst << ")";
  detail = os.str();
  return passed >= 99;
}

bool criterion_5_critical_path(std::string& detail) {
  std::mt19937 rng(424242);
  std::uniform_int_distribution<std::size_t> size_dist(1, 10);
  std::uniform_real_distribution<double> weight(0.0, 10.0);
  std::uniform_real_distribution<double> coin(0.0, 1.0);

  for (int trial = 0; trial < 1000; ++trial) {
    Dag dag;
    dag.vertex_count = size_dist(rng);
    for (std::size_t i = 0; i < dag.vertex_count; ++i)
      for (std::size_t j = i + 1; j < dag.vertex_count; ++j)
        if (coin(rng) < 0.3) dag.arcs.emplace_back(i, j);
    std::vector<bool> has_in(dag.vertex_count, false), has_out(dag.vertex_count, false);
    for (const auto& [u, v] : dag.arcs) {
      has_in[v] = true;
      has_out[u] = true;
    }
    for (std::size_t v = 1; v < dag.vertex_count; ++v)
      if (!has_in[v]) dag.arcs.emplace_back(0, v);
    for (std::size_t v = 0; v + 1 < dag.vertex_count; ++v)
      if (!has_out[v]) dag.arcs.emplace_back(v, dag.vertex_count - 1);

    std::vector<double> weights(dag.vertex_count);
    for (double& w : weights) w = weight(rng);

    // Exhaustive source->sink enumeration.
    const std::size_t source = single_source(dag);
    const std::size_t sink = single_sink(dag);
    std::vector<std::vector<std::size_t>> out(dag.vertex_count);
    for (const auto& [u, v] : dag.arcs) out[u].push_back(v);
    double best = -1.0;
    auto walk = [&](auto&& self, std::size_t v, double sum) -> void {
      sum += weights[v];
      if (v == sink) {
        best = std::max(best, sum);
        return;
      }
      for (std::size_t w : out[v]) self(self, w, sum);
    };
    walk(walk, source, 0.0);

    if (critical_path(dag, weights) != best) {
      detail = "mismatch at trial " + std::to_string(trial);
      return false;
    }
  }
  detail = "1000 random dags, exact match against path enumeration";
  return true;
}

bool criterion_6_case_study(std::string& detail) {
  const auto doc = load_network(fs::path(g_networks_dir) / "development-process.json");
  auto batch = run_batch(*doc.root, 4624, 5772156649u, 2, doc.name);
  const auto bins = histogram(batch, 1.0);

  // Locate the widest run of empty bins strictly inside the occupied range;
  // a bimodal sample has one separating its modes.
  std::size_t best_length = 0, best_end = 0, run = 0;
  for (std::size_t i = 0; i < bins.size(); ++i) {
    if (bins[i].count == 0) {
      ++run;
      if (run > best_length) {
        best_length = run;
        best_end = i;
      }
    } else {
      run = 0;
    }
  }
  if (best_length < 3) {
    detail = "no inter-mode gap of at least 3 empty unit bins";
    return false;
  }
  const double threshold = bins[best_end - best_length / 2].right_edge;
  std::size_t below = 0;
  for (double t : batch.times)
    if (t < threshold) ++below;
  const double share = static_cast<double>(below) / static_cast<double>(batch.size());
  std::ostringstream os;
  os << "gap of " << best_length << " empty bins, split at " << threshold << ", lower-mode mass "
     << share << ", target 0.45 within 0.03";
  detail = os.str();
  return std::abs(share - 0.45) <= 0.03;
}

bool criterion_7_band_coverage(std::string& detail) {
  auto net = reducible_test_network();
  const auto oracle = analyze(*net, 0.01);
  const int runs = 200;
  int covered = 0;
  for (int run = 0; run < runs; ++run) {
    auto batch = run_batch(*net, 50, 1000u + static_cast<std::uint64_t>(run), 1);
    auto emp = ecdf(batch);
    auto band = confidence_band(emp, 0.10);
    bool inside = true;
    for (std::size_t k = 0; k < oracle.size() && inside; ++k) {
      const double t = oracle.grid_time(k);
      const double f = std::min(oracle.cdf()[k], 1.0);
      inside = band.lower(t) <= f && f <= band.upper(t);
    }
    if (inside) ++covered;
  }
  const double rate = static_cast<double>(covered) / runs;
  std::ostringstream os;
  os << "band covered the oracle cdf in " << covered << "/" << runs << " runs (rate " << rate
     << "), target 0.90 within 0.05";
  detail = os.str();
  return std::abs(rate - 0.90) <= 0.05;
}

bool criterion_8_density_fidelity(std::string& detail) {
  auto net = make_trivial("activity", Triangular{0, 1, 2});
  const std::size_t n = 100000;
  auto batch = run_batch(*net, n, 1414213562u, 2);
  auto emp = ecdf(batch);
  const auto estimate = approximate_density(emp, 25);

  auto analytic = [](double x) {
    if (x < 0.0 || x > 2.0) return 0.0;
    return x <= 1.0 ? x : 2.0 - x;
  };
  double sup = 0.0;
  for (const auto& [t, f] : estimate.points)
    if (t >= 0.1 && t <= 1.9) sup = std::max(sup, std::abs(f - analytic(t)));

  double integral = 0.0;
  for (std::size_t i = 0; i + 1 < estimate.points.size(); ++i) {
    const auto& [t0, f0] = estimate.points[i];
    const auto& [t1, f1] = estimate.points[i + 1];
    integral += 0.5 * (f0 + f1) * (t1 - t0);
  }

  std::ostringstream os;
  os << "sup deviation " << sup << " (limit 0.05) over " << estimate.points.size()
     << " points, trapezoid integral " << integral << " (target 1 within 0.1)";
  detail = os.str();
  return sup <= 0.05 && std::abs(integral - 1.0) <= 0.1;
}

bool files_identical(const fs::path& a, const fs::path& b) {
  std::ifstream fa(a, std::ios::binary), fb(b, std::ios::binary);
  if (!fa || !fb) return false;
  std::ostringstream sa, sb;
  sa << fa.rdbuf();
  sb << fb.rdbuf();
  return sa.str() == sb.str();
}

bool criterion_9_reproducibility(std::string& detail) {
  if (g_cli_path.empty()) {
    detail = "no --cli path given";
    return false;
  }
  const fs::path base = fs::temp_directory_path() / "ndsan-acceptance";
  fs::remove_all(base);
  fs::create_directories(base);
  const fs::path network = fs::path(g_networks_dir) / "development-process.json";

  for (int run = 1; run <= 2; ++run) {
    std::ostringstream command;
    command << '"' << g_cli_path << '"' << " simulate \"" << network.string()
            << "\" --replications 400 --seed 97 --out \"" << (base / std::to_string(run)).string()
            << "\" > /dev/null";
    if (std::system(command.str().c_str()) != 0) {
      detail = "simulate run " + std::to_string(run) + " failed";
      return false;
    }
  }

  bool ok = true;
  std::string mismatched;
  for (const char* file : {"samples.csv", "ecdf.csv", "histogram.csv", "density.csv"}) {
    if (!files_identical(base / "1" / file, base / "2" / file)) {
      ok = false;
      mismatched += std::string(" ") + file;
    }
  }
  detail = ok ? "two identical runs produced byte-identical samples.csv, ecdf.csv, histogram.csv, "
                "density.csv"
              : "files differ between identical runs:" + mismatched;
  return ok;
}

struct Criterion {
  int id;
  const char* title;
  std::function<bool(std::string&)> run;
};

const Criterion kCriteria[] = {
    {1, "KS planning exactness", criterion_1_planning},
    {2, "loop outcome distribution", criterion_2_loop},
    {3, "decision branch distribution", criterion_3_decision},
    {4, "oracle/sampler KS agreement", criterion_4_oracle_equivalence},
    {5, "critical path vs exhaustive enumeration", criterion_5_critical_path},
    {6, "case-study bimodal split", criterion_6_case_study},
    {7, "confidence band coverage", criterion_7_band_coverage},
    {8, "approximate density fidelity", criterion_8_density_fidelity},
    {9, "CLI reproducibility", criterion_9_reproducibility},
};

}  // namespace

int main(int argc, char** argv) {
  int selected = 0;
  for (int i = 1; i + 1 < argc; i += 2) {
    const std::string flag = argv[i];
    if (flag == "--criterion") selected = std::atoi(argv[i + 1]);
    else if (flag == "--cli") g_cli_path = argv[i + 1];
    else if (flag == "--networks") g_networks_dir = argv[i + 1];
    else {
      std::fprintf(stderr, "usage: acceptance [--criterion N] [--cli PATH] [--networks DIR]\n");
      return 2;
    }
  }
  if (g_networks_dir.empty()) g_networks_dir = "networks";

  int failures = 0;
  for (const auto& criterion : kCriteria) {
    if (selected != 0 && criterion.id != selected) continue;
    std::string detail;
    bool ok = false;
    try {
      ok = criterion.run(detail);
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    std::printf("criterion %d: %s — %s (%s)\n", criterion.id, ok ? "PASS" : "FAIL",
                criterion.title, detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
  }
  return failures;
}
