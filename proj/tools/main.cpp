// Command-line front end: plan a replication count, simulate a network,
// analyze it exactly when possible, and export plot-ready tables.

#include <unistd.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <thread>

#include <CLI11.hpp>

#include "ndsan/discretized.hpp"
#include "ndsan/empirical.hpp"
#include "ndsan/error.hpp"
#include "ndsan/ks_planning.hpp"
#include "ndsan/netspec_io.hpp"
#include "ndsan/sampler.hpp"

namespace {

namespace fs = std::filesystem;
using namespace ndsan;

unsigned worker_threads() {
  const unsigned hardware = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("NDSAN_THREADS")) {
    char* end = nullptr;
    const long parsed = std::strtol(env, &end, 10);
    if (end && *end == '\0' && parsed >= 1)
      return std::min<unsigned>(static_cast<unsigned>(parsed), hardware);
    std::cerr << "warning: ignoring invalid NDSAN_THREADS value '" << env << "'\n";
  }
  return hardware;
}

std::uint64_t resolve_seed(std::optional<std::uint64_t> seed) {
  if (seed) return *seed;
  if (!isatty(STDIN_FILENO))
    throw Error("--seed is required in non-interactive mode so the run can be reproduced");
  std::random_device device;
  const std::uint64_t drawn =
      (static_cast<std::uint64_t>(device()) << 32) ^ static_cast<std::uint64_t>(device());
  std::cout << "seed: " << drawn << " (drawn at random; pass --seed " << drawn
            << " to reproduce this run)\n";
  return drawn;
}

void write_file(const fs::path& file, const std::function<void(std::ostream&)>& writer) {
  std::ofstream out(file, std::ios::binary);
  if (!out) throw IoError("cannot write " + file.string());
  writer(out);
  if (!out) throw IoError("failed writing " + file.string());
}

void print_summary(const NetworkDocument& doc, const SampleBatch& batch,
                   const EmpiricalDistribution& emp) {
  double total = 0.0;
  for (double t : batch.times) total += t;
  std::cout << "network: " << doc.name << "\n"
            << "replications: " << batch.size() << "\n"
            << "seed: " << batch.master_seed << "\n"
            << "min: " << format_value(emp.sorted().front()) << "\n"
            << "max: " << format_value(emp.sorted().back()) << "\n"
            << "mean: " << format_value(total / static_cast<double>(batch.size())) << "\n";
  for (double p : {0.05, 0.25, 0.50, 0.75, 0.95})
    std::cout << "q" << static_cast<int>(std::lround(p * 100)) << ": "
              << format_value(emp.quantile(p)) << "\n";
}

int run_validate(const std::string& network_file) {
  std::ifstream in(network_file);
  if (!in) throw IoError("cannot open " + network_file);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  const NetworkDocument doc = parse_network(buffer.str());
  std::cout << "OK, " << activity_count(*doc.root) << " activities\n";
  return 0;
}

int run_plan(double max_error, double confidence) {
  const KsPlan plan = plan_sample_size(max_error, confidence);
  std::cout << "replications: " << plan.replications << "\n"
            << "critical value: " << format_value(plan.critical_value) << "\n"
            << "(max error " << format_value(plan.max_error) << ", confidence "
            << format_value(plan.confidence) << ", epsilon " << format_value(plan.epsilon) << ")\n";
  return 0;
}

struct SimulateOptions {
  std::string network_file;
  std::optional<std::size_t> replications;
  std::optional<double> max_error;
  std::optional<double> confidence;
  std::optional<std::uint64_t> seed;
  std::string out_dir = ".";
  double bin_width = 1.0;
  std::size_t delta = 25;
};

int run_simulate(const SimulateOptions& opt) {
  const NetworkDocument doc = load_network(opt.network_file);

  std::size_t replications = 0;
  if (opt.replications) {
    replications = *opt.replications;
    if (replications < 1) throw Error("--replications must be >= 1");
  } else {
    const KsPlan plan = plan_sample_size(*opt.max_error, *opt.confidence);
    replications = plan.replications;
    std::cout << "planned replications: " << plan.replications << " (critical value "
              << format_value(plan.critical_value) << ")\n";
  }

  const std::uint64_t seed = resolve_seed(opt.seed);
  const SampleBatch batch = run_batch(*doc.root, replications, seed, worker_threads(), doc.name);
  const EmpiricalDistribution emp = ecdf(batch);
  const auto bins = histogram(batch, opt.bin_width);
  DensityEstimate density;
  if (batch.size() >= 2)
    density = approximate_density(emp, std::clamp<std::size_t>(opt.delta, 1, batch.size() - 1));

  const fs::path dir(opt.out_dir);
  fs::create_directories(dir);
  write_file(dir / "samples.csv", [&](std::ostream& o) { write_samples_csv(o, batch.times); });
  write_file(dir / "ecdf.csv", [&](std::ostream& o) { write_ecdf_csv(o, emp); });
  write_file(dir / "histogram.csv", [&](std::ostream& o) { write_histogram_csv(o, bins); });
  write_file(dir / "density.csv", [&](std::ostream& o) { write_density_csv(o, density); });

  print_summary(doc, batch, emp);
  std::cout << "wrote samples.csv, ecdf.csv, histogram.csv, density.csv to " << dir.string()
            << "\n";
  if (density.skipped > 0)
    std::cout << "note: " << density.skipped
              << " density point(s) skipped because of tied order statistics\n";
  return 0;
}

int run_analyze(const std::string& network_file, double grid_step, const std::string& out_file) {
  const NetworkDocument doc = load_network(network_file);
  DiscretizedDistribution dist = [&] {
    try {
      return analyze(*doc.root, grid_step);
    } catch (const NotReducibleError& e) {
      throw NotReducibleError(std::string(e.what()) + " (see the simulate command)");
    }
  }();
  write_file(out_file, [&](std::ostream& o) { write_oracle_cdf_csv(o, dist); });
  std::cout << "network: " << doc.name << "\n"
            << "grid step: " << format_value(grid_step) << "\n"
            << "grid points: " << dist.size() << "\n"
            << "mean: " << format_value(dist.mean()) << "\n"
            << "wrote " << out_file << "\n";
  return 0;
}

int run_compare(const std::string& network_file, std::size_t replications,
                std::optional<std::uint64_t> seed, double grid_step) {
  const NetworkDocument doc = load_network(network_file);
  const DiscretizedDistribution oracle = analyze(*doc.root, grid_step);
  const std::uint64_t used_seed = resolve_seed(seed);
  const SampleBatch batch =
      run_batch(*doc.root, replications, used_seed, worker_threads(), doc.name);
  const EmpiricalDistribution emp = ecdf(batch);
  const double distance = ks_statistic(emp, [&](double x) { return oracle.cdf_at(x); });

  std::cout << "network: " << doc.name << "\n"
            << "replications: " << replications << "\n"
            << "seed: " << used_seed << "\n"
            << "ks distance: " << format_value(distance) << "\n";
  bool all_pass = true;
  for (double epsilon : {0.20, 0.10, 0.05, 0.01}) {
    const double critical = ks_critical_value(replications, epsilon);
    const bool pass = distance <= critical;
    all_pass = all_pass && pass;
    std::cout << "epsilon " << format_value(epsilon) << ": critical " << format_value(critical)
              << " " << (pass ? "PASS" : "FAIL") << "\n";
  }
  return all_pass ? 0 : 1;
}

int run_report(const std::string& samples_file, double bin_width, std::size_t delta,
               const std::optional<std::string>& out_dir) {
  std::ifstream in(samples_file);
  if (!in) throw IoError("cannot open " + samples_file);
  const std::vector<double> samples = read_samples_csv(in);
  if (samples.empty()) throw EmptySampleError("samples file has no data rows");

  const EmpiricalDistribution emp{std::vector<double>(samples)};
  const auto bins = histogram(std::span<const double>(samples), bin_width);
  DensityEstimate density;
  if (samples.size() >= 2)
    density = approximate_density(emp, std::clamp<std::size_t>(delta, 1, samples.size() - 1));

  fs::path dir = out_dir ? fs::path(*out_dir) : fs::path(samples_file).parent_path();
  if (dir.empty()) dir = ".";
  fs::create_directories(dir);
  const fs::path hist_file = dir / "histogram.csv";
  const fs::path density_file = dir / "density.csv";
  write_file(hist_file, [&](std::ostream& o) { write_histogram_csv(o, bins); });
  write_file(density_file, [&](std::ostream& o) { write_density_csv(o, density); });
  std::cout << "samples: " << samples.size() << "\n"
            << "wrote " << hist_file.string() << " and " << density_file.string() << "\n";
  if (density.skipped > 0)
    std::cout << "note: " << density.skipped
              << " density point(s) skipped because of tied order statistics\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "NDSAN: completion-time estimation for nondeterministic stochastic activity networks"};
  app.require_subcommand(1);

  std::string network_file;
  auto* validate_cmd = app.add_subcommand("validate", "Check a network document");
  validate_cmd->add_option("network", network_file, "network document (JSON)")->required();

  double max_error = 0.0, confidence = 0.0;
  auto* plan_cmd = app.add_subcommand("plan", "Replications needed for a target accuracy");
  plan_cmd->add_option("--max-error", max_error, "maximum cdf error e in (0, 1)")->required();
  plan_cmd
      ->add_option("--confidence", confidence, "confidence level c in {0.80, 0.90, 0.95, 0.99}")
      ->required();

  SimulateOptions sim;
  std::size_t sim_replications = 0;
  double sim_max_error = 0.0, sim_confidence = 0.0;
  std::uint64_t sim_seed = 0;
  auto* simulate_cmd = app.add_subcommand("simulate", "Run the simulation and export results");
  simulate_cmd->add_option("network", sim.network_file, "network document (JSON)")->required();
  auto* rep_opt = simulate_cmd->add_option("--replications", sim_replications, "number of runs");
  auto* err_opt = simulate_cmd->add_option("--max-error", sim_max_error, "plan from this accuracy");
  auto* conf_opt = simulate_cmd->add_option("--confidence", sim_confidence, "plan confidence level");
  auto* sim_seed_opt = simulate_cmd->add_option("--seed", sim_seed, "master seed (reproducibility)");
  simulate_cmd->add_option("--out", sim.out_dir, "output directory")->capture_default_str();
  simulate_cmd->add_option("--bin-width", sim.bin_width, "histogram bin width")
      ->capture_default_str();
  simulate_cmd->add_option("--delta", sim.delta, "density order-statistic stride")
      ->capture_default_str();

  std::string analyze_network, analyze_out = "oracle_cdf.csv";
  double analyze_step = 0.01;
  auto* analyze_cmd =
      app.add_subcommand("analyze", "Exact completion-time cdf (reducible networks)");
  analyze_cmd->add_option("network", analyze_network, "network document (JSON)")->required();
  analyze_cmd->add_option("--grid-step", analyze_step, "grid resolution")->capture_default_str();
  analyze_cmd->add_option("--out", analyze_out, "output cdf table")->capture_default_str();

  std::string compare_network;
  std::size_t cmp_replications = 0;
  std::uint64_t cmp_seed = 0;
  double compare_step = 0.01;
  auto* compare_cmd = app.add_subcommand("compare", "KS distance between simulation and exact cdf");
  compare_cmd->add_option("network", compare_network, "network document (JSON)")->required();
  compare_cmd->add_option("--replications", cmp_replications, "number of runs")->required();
  auto* cmp_seed_opt = compare_cmd->add_option("--seed", cmp_seed, "master seed");
  compare_cmd->add_option("--grid-step", compare_step, "grid resolution")->capture_default_str();

  std::string samples_file, report_out;
  double report_bin_width = 1.0;
  std::size_t report_delta = 25;
  auto* report_cmd = app.add_subcommand("report", "Histogram and density from a samples file");
  report_cmd->add_option("samples", samples_file, "samples.csv produced by simulate")->required();
  report_cmd->add_option("--bin-width", report_bin_width, "histogram bin width")
      ->capture_default_str();
  report_cmd->add_option("--delta", report_delta, "density order-statistic stride")
      ->capture_default_str();
  auto* report_out_opt = report_cmd->add_option("--out", report_out, "output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand(validate_cmd)) return run_validate(network_file);
    if (app.got_subcommand(plan_cmd)) return run_plan(max_error, confidence);
    if (app.got_subcommand(simulate_cmd)) {
      const bool planned = err_opt->count() > 0 || conf_opt->count() > 0;
      if (rep_opt->count() > 0 && planned)
        throw Error("pass either --replications or --max-error with --confidence, not both");
      if (rep_opt->count() == 0 && !(err_opt->count() > 0 && conf_opt->count() > 0))
        throw Error("pass either --replications or --max-error with --confidence");
      if (rep_opt->count() > 0) sim.replications = sim_replications;
      if (err_opt->count() > 0) sim.max_error = sim_max_error;
      if (conf_opt->count() > 0) sim.confidence = sim_confidence;
      if (sim_seed_opt->count() > 0) sim.seed = sim_seed;
      return run_simulate(sim);
    }
    if (app.got_subcommand(analyze_cmd))
      return run_analyze(analyze_network, analyze_step, analyze_out);
    if (app.got_subcommand(compare_cmd)) {
      std::optional<std::uint64_t> seed;
      if (cmp_seed_opt->count() > 0) seed = cmp_seed;
      return run_compare(compare_network, cmp_replications, seed, compare_step);
    }
    if (app.got_subcommand(report_cmd)) {
      std::optional<std::string> out;
      if (report_out_opt->count() > 0) out = report_out;
      return run_report(samples_file, report_bin_width, report_delta, out);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
