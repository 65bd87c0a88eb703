// Integration checks that drive the installed command-line binary.
// argv[1] = path to the ndsan binary, argv[2] = shipped networks directory.

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace {

namespace fs = std::filesystem;

std::string g_cli;
fs::path g_networks;
fs::path g_work;
int g_failures = 0;

struct RunResult {
  int exit_code = -1;
  std::string output;
};

RunResult run(const std::string& args, const std::string& env = {}) {
  const fs::path capture = g_work / "capture.txt";
  const std::string command =
      env + (env.empty() ? "" : " ") + '"' + g_cli + "\" " + args + " > \"" + capture.string() +
      "\" 2>&1";
  const int raw = std::system(command.c_str());
  RunResult result;
  result.exit_code = raw < 0 ? raw : WEXITSTATUS(raw);
  std::ifstream in(capture);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  result.output = buffer.str();
  return result;
}

void expect(bool condition, const std::string& label, const RunResult& result) {
  if (condition) {
    std::printf("ok: %s\n", label.c_str());
  } else {
    ++g_failures;
    std::printf("FAILED: %s\n  exit=%d output:\n%s\n", label.c_str(), result.exit_code,
                result.output.c_str());
  }
}

std::string slurp(const fs::path& file) {
  std::ifstream in(file, std::ios::binary);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_text(const fs::path& file, const std::string& text) {
  std::ofstream out(file);
  out << text;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 3) {
    std::fprintf(stderr, "usage: cli_tests <ndsan-binary> <networks-dir>\n");
    return 2;
  }
  g_cli = argv[1];
  g_networks = argv[2];
  g_work = fs::temp_directory_path() / "ndsan-cli-tests";
  fs::remove_all(g_work);
  fs::create_directories(g_work);

  const std::string dev = (g_networks / "development-process.json").string();

  {
    auto r = run("validate \"" + dev + "\"");
    expect(r.exit_code == 0 && r.output.find("OK, 27 activities") != std::string::npos,
           "validate accepts the development process", r);
  }
  {
    auto r = run("validate /no/such/file.json");
    expect(r.exit_code != 0 && r.output.find("error:") != std::string::npos,
           "validate reports a missing file", r);
  }
  {
    const fs::path broken = g_work / "broken.json";
    write_text(broken, R"({"format_version": 1, "name": "broken", "root": {
      "kind": "loop",
      "entry": {"kind": "trivial", "name": "in", "duration": {"constant": [1]}},
      "body": {"kind": "trivial", "name": "body", "duration": {"constant": [1]}},
      "exit": {"kind": "trivial", "name": "out", "duration": {"constant": [1]}},
      "continue_probs": [0.5, 0.2, 0.1]
    }})");
    auto r = run("validate \"" + broken.string() + "\"");
    expect(r.exit_code != 0 && r.output.find("root") != std::string::npos &&
               r.output.find("last loop probability") != std::string::npos,
           "validate names the offending loop path", r);
  }
  {
    auto r = run("plan --max-error 0.02 --confidence 0.95");
    expect(r.exit_code == 0 && r.output.find("replications: 4624") != std::string::npos &&
               r.output.find("critical value: 0.02") != std::string::npos,
           "plan prints N and the critical value", r);
  }
  {
    const fs::path net = g_work / "const.json";
    write_text(net, R"({"format_version": 1, "name": "const", "root":
      {"kind": "trivial", "name": "only", "duration": {"constant": [2]}}})");
    auto r = run("simulate \"" + net.string() + "\" --replications 3 --seed 5 --out \"" +
                 (g_work / "const-out").string() + "\"");
    expect(r.exit_code == 0 && slurp(g_work / "const-out" / "samples.csv") == "time\n2\n2\n2\n",
           "simulate writes the constant sample file", r);
  }
  {
    // Same seed, different worker counts: byte-identical outputs either way.
    auto first = run("simulate \"" + dev + "\" --replications 200 --seed 11 --out \"" +
                         (g_work / "rep1").string() + "\"",
                     "NDSAN_THREADS=1");
    auto second = run("simulate \"" + dev + "\" --replications 200 --seed 11 --out \"" +
                          (g_work / "rep2").string() + "\"",
                      "NDSAN_THREADS=2");
    bool identical = first.exit_code == 0 && second.exit_code == 0;
    for (const char* file : {"samples.csv", "ecdf.csv", "histogram.csv", "density.csv"})
      identical = identical && slurp(g_work / "rep1" / file) == slurp(g_work / "rep2" / file) &&
                  !slurp(g_work / "rep1" / file).empty();
    expect(identical, "simulate is reproducible for a fixed seed across thread counts", second);
  }
  {
    auto r = run("simulate \"" + dev + "\" --replications 10 --out \"" +
                 (g_work / "noseed").string() + "\"");
    expect(r.exit_code != 0 && r.output.find("--seed") != std::string::npos,
           "simulate requires a seed in non-interactive mode", r);
  }
  {
    auto r = run("simulate \"" + dev + "\" --max-error 0.02 --confidence 0.95 --seed 3 --out \"" +
                 (g_work / "planned").string() + "\"");
    expect(r.exit_code == 0 && r.output.find("planned replications: 4624") != std::string::npos &&
               r.output.find("replications: 4624") != std::string::npos,
           "simulate plans N from the accuracy target", r);
  }
  {
    auto r = run("analyze \"" + dev + "\" --grid-step 0.02 --out \"" +
                 (g_work / "oracle_cdf.csv").string() + "\"");
    const std::string table = slurp(g_work / "oracle_cdf.csv");
    expect(r.exit_code == 0 && table.rfind("time,cdf\n", 0) == 0 &&
               table.find("\n0,0.0\n") != std::string::npos,
           "analyze writes the oracle cdf table", r);
  }
  {
    const fs::path shared = g_work / "shared.json";
    write_text(shared, R"({"format_version": 1, "name": "shared", "root": {
      "kind": "acyclic",
      "vertices": [
        {"kind": "trivial", "name": "s", "duration": {"constant": [1]}},
        {"kind": "trivial", "name": "u", "duration": {"uniform": [0, 1]}},
        {"kind": "trivial", "name": "v", "duration": {"uniform": [0, 1]}},
        {"kind": "trivial", "name": "w", "duration": {"uniform": [0, 1]}},
        {"kind": "trivial", "name": "t", "duration": {"constant": [1]}}
      ],
      "arcs": [[0, 1], [0, 2], [1, 4], [1, 3], [2, 3], [3, 4]]
    }})");
    auto r = run("analyze \"" + shared.string() + "\"");
    expect(r.exit_code != 0 && r.output.find("simulate") != std::string::npos,
           "analyze refuses shared-vertex networks and points at simulate", r);
  }
  {
    auto r = run("compare \"" + dev + "\" --replications 20000 --seed 100 --grid-step 0.02");
    expect(r.exit_code == 0 && r.output.find("ks distance") != std::string::npos &&
               r.output.find("epsilon 0.01: ") != std::string::npos &&
               r.output.find("FAIL") == std::string::npos,
           "compare passes the oracle cross-check on the case study", r);
  }
  {
    auto r = run("report \"" + (g_work / "rep1" / "samples.csv").string() + "\" --bin-width 2 " +
                 "--delta 10 --out \"" + (g_work / "report-out").string() + "\"");
    const std::string hist = slurp(g_work / "report-out" / "histogram.csv");
    expect(r.exit_code == 0 && hist.rfind("right_edge,count", 0) == 0 &&
               fs::exists(g_work / "report-out" / "density.csv"),
           "report regenerates histogram and density tables", r);
  }

  if (g_failures == 0) std::printf("all cli checks passed\n");
  return g_failures == 0 ? 0 : 1;
}
