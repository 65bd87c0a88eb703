#include "ndsan/netspec_io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "ndsan/error.hpp"

namespace ndsan {

namespace {

using nlohmann::json;

[[noreturn]] void schema_error(const std::string& where, const std::string& what) {
  throw SchemaError(where + ": " + what);
}

const json& require_field(const json& object, const char* key, const std::string& where) {
  if (!object.is_object()) schema_error(where, "expected an object");
  const auto it = object.find(key);
  if (it == object.end()) schema_error(where, std::string("missing field '") + key + "'");
  return *it;
}

double require_number(const json& value, const std::string& where) {
  if (!value.is_number()) schema_error(where, "expected a number");
  return value.get<double>();
}

std::string require_string(const json& value, const std::string& where) {
  if (!value.is_string()) schema_error(where, "expected a string");
  return value.get<std::string>();
}

Duration parse_duration(const json& value, const std::string& where) {
  if (!value.is_object() || value.size() != 1)
    schema_error(where, "duration must be an object with exactly one family key");
  const auto it = value.begin();
  const std::string family = it.key();
  const json& params = it.value();
  if (!params.is_array()) schema_error(where, "duration parameters must be an array");
  auto arity = [&](std::size_t n) {
    if (params.size() != n)
      schema_error(where, family + " takes " + std::to_string(n) + " parameter(s), got " +
                              std::to_string(params.size()));
  };
  auto at = [&](std::size_t i) { return require_number(params[i], where); };

  if (family == "constant") {
    arity(1);
    return Constant{at(0)};
  }
  if (family == "triangular") {
    arity(3);
    return Triangular{at(0), at(1), at(2)};
  }
  if (family == "truncated_normal") {
    arity(2);
    return TruncatedNormal{at(0), at(1)};
  }
  if (family == "uniform") {
    arity(2);
    return Uniform{at(0), at(1)};
  }
  if (family == "exponential") {
    arity(1);
    return Exponential{at(0)};
  }
  schema_error(where, "unknown duration family '" + family + "'");
}

NodePtr parse_node(const json& value, const std::string& where) {
  const std::string kind = require_string(require_field(value, "kind", where), where + "/kind");

  if (kind == "trivial") {
    auto name = require_string(require_field(value, "name", where), where + "/name");
    auto duration = parse_duration(require_field(value, "duration", where), where + "/duration");
    return make_trivial(std::move(name), duration);
  }

  if (kind == "acyclic") {
    const json& vertices = require_field(value, "vertices", where);
    if (!vertices.is_array()) schema_error(where + "/vertices", "expected an array");
    std::vector<NodePtr> children;
    children.reserve(vertices.size());
    for (std::size_t i = 0; i < vertices.size(); ++i)
      children.push_back(parse_node(vertices[i], where + "/vertices[" + std::to_string(i) + "]"));
    Dag dag;
    dag.vertex_count = children.size();
    const json& arcs = require_field(value, "arcs", where);
    if (!arcs.is_array()) schema_error(where + "/arcs", "expected an array");
    for (std::size_t i = 0; i < arcs.size(); ++i) {
      const json& arc = arcs[i];
      const std::string arc_where = where + "/arcs[" + std::to_string(i) + "]";
      if (!arc.is_array() || arc.size() != 2) schema_error(arc_where, "expected a pair [from, to]");
      if (!arc[0].is_number_unsigned() || !arc[1].is_number_unsigned())
        schema_error(arc_where, "vertex indices must be nonnegative integers");
      dag.arcs.emplace_back(arc[0].get<std::size_t>(), arc[1].get<std::size_t>());
    }
    return make_acyclic(std::move(dag), std::move(children));
  }

  if (kind == "decision") {
    auto entry = parse_node(require_field(value, "entry", where), where + "/entry");
    const json& branches = require_field(value, "branches", where);
    if (!branches.is_array()) schema_error(where + "/branches", "expected an array");
    std::vector<DecisionBranch> parsed;
    parsed.reserve(branches.size());
    for (std::size_t i = 0; i < branches.size(); ++i) {
      const std::string branch_where = where + "/branches[" + std::to_string(i) + "]";
      const json& b = branches[i];
      DecisionBranch branch;
      branch.probability = require_number(require_field(b, "probability", branch_where),
                                          branch_where + "/probability");
      branch.child = parse_node(require_field(b, "child", branch_where), branch_where + "/child");
      parsed.push_back(std::move(branch));
    }
    auto exit = parse_node(require_field(value, "exit", where), where + "/exit");
    return make_decision(std::move(entry), std::move(parsed), std::move(exit));
  }

  if (kind == "loop") {
    auto entry = parse_node(require_field(value, "entry", where), where + "/entry");
    auto body = parse_node(require_field(value, "body", where), where + "/body");
    auto exit = parse_node(require_field(value, "exit", where), where + "/exit");
    const json& probs = require_field(value, "continue_probs", where);
    if (!probs.is_array()) schema_error(where + "/continue_probs", "expected an array");
    std::vector<double> q;
    q.reserve(probs.size());
    for (std::size_t i = 0; i < probs.size(); ++i)
      q.push_back(require_number(probs[i], where + "/continue_probs[" + std::to_string(i) + "]"));
    return make_loop(std::move(entry), std::move(body), std::move(exit), std::move(q));
  }

  schema_error(where, "unknown node kind '" + kind + "'");
}

// Canonical number formatting: shortest text that parses back to the same
// double, so serialization is byte-stable and round-trips exactly.
std::string format_roundtrip(double v) {
  char buffer[32];
  const auto result = std::to_chars(buffer, buffer + sizeof buffer, v);
  return std::string(buffer, result.ptr);
}

void write_json_string(std::ostream& out, const std::string& s) {
  out << '"';
  for (char c : s) {
    switch (c) {
      case '"': out << "\\\""; break;
      case '\\': out << "\\\\"; break;
      case '\n': out << "\\n"; break;
      case '\t': out << "\\t"; break;
      case '\r': out << "\\r"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buffer[8];
          std::snprintf(buffer, sizeof buffer, "\\u%04x", c);
          out << buffer;
        } else {
          out << c;
        }
    }
  }
  out << '"';
}

void write_duration(std::ostream& out, const Duration& d) {
  out << "{\"" << family_name(d) << "\": [";
  using detail::overloaded;
  std::visit(overloaded{
                 [&](const Constant& c) { out << format_roundtrip(c.value); },
                 [&](const Triangular& t) {
                   out << format_roundtrip(t.low) << ", " << format_roundtrip(t.mode) << ", "
                       << format_roundtrip(t.high);
                 },
                 [&](const TruncatedNormal& n) {
                   out << format_roundtrip(n.mean) << ", " << format_roundtrip(n.variance);
                 },
                 [&](const Uniform& u) {
                   out << format_roundtrip(u.low) << ", " << format_roundtrip(u.high);
                 },
                 [&](const Exponential& e) { out << format_roundtrip(e.rate); },
             },
             d);
  out << "]}";
}

void write_node(std::ostream& out, const Node& node, int depth) {
  const std::string pad(2 * static_cast<std::size_t>(depth), ' ');
  const std::string inner = pad + "  ";
  using detail::overloaded;
  std::visit(
      overloaded{
          [&](const Trivial& t) {
            out << "{\"kind\": \"trivial\", \"name\": ";
            write_json_string(out, t.name);
            out << ", \"duration\": ";
            write_duration(out, t.duration);
            out << "}";
          },
          [&](const Acyclic& a) {
            out << "{\n" << inner << "\"kind\": \"acyclic\",\n" << inner << "\"vertices\": [\n";
            for (std::size_t i = 0; i < a.children.size(); ++i) {
              out << inner << "  ";
              write_node(out, *a.children[i], depth + 2);
              out << (i + 1 < a.children.size() ? ",\n" : "\n");
            }
            out << inner << "],\n" << inner << "\"arcs\": [";
            for (std::size_t i = 0; i < a.dag.arcs.size(); ++i) {
              if (i) out << ", ";
              out << "[" << a.dag.arcs[i].first << ", " << a.dag.arcs[i].second << "]";
            }
            out << "]\n" << pad << "}";
          },
          [&](const Decision& d) {
            out << "{\n" << inner << "\"kind\": \"decision\",\n" << inner << "\"entry\": ";
            write_node(out, *d.entry, depth + 1);
            out << ",\n" << inner << "\"branches\": [\n";
            for (std::size_t i = 0; i < d.branches.size(); ++i) {
              out << inner << "  {\"probability\": " << format_roundtrip(d.branches[i].probability)
                  << ", \"child\": ";
              write_node(out, *d.branches[i].child, depth + 2);
              out << "}" << (i + 1 < d.branches.size() ? ",\n" : "\n");
            }
            out << inner << "],\n" << inner << "\"exit\": ";
            write_node(out, *d.exit, depth + 1);
            out << "\n" << pad << "}";
          },
          [&](const Loop& l) {
            out << "{\n" << inner << "\"kind\": \"loop\",\n" << inner << "\"entry\": ";
            write_node(out, *l.entry, depth + 1);
            out << ",\n" << inner << "\"body\": ";
            write_node(out, *l.body, depth + 1);
            out << ",\n" << inner << "\"exit\": ";
            write_node(out, *l.exit, depth + 1);
            out << ",\n" << inner << "\"continue_probs\": [";
            for (std::size_t i = 0; i < l.continue_probs.size(); ++i) {
              if (i) out << ", ";
              out << format_roundtrip(l.continue_probs[i]);
            }
            out << "]\n" << pad << "}";
          },
      },
      node.value);
}

}  // namespace

NetworkDocument parse_network(const std::string& text) {
  json document;
  try {
    document = json::parse(text);
  } catch (const json::parse_error& e) {
    throw SyntaxError("byte " + std::to_string(e.byte) + ": " + e.what());
  }

  NetworkDocument doc;
  const json& version = require_field(document, "format_version", "document");
  if (!version.is_number_integer() || version.get<int>() != 1)
    schema_error("document/format_version", "unsupported format version, expected 1");
  doc.format_version = 1;
  doc.name = require_string(require_field(document, "name", "document"), "document/name");
  if (const auto it = document.find("notes"); it != document.end())
    doc.notes = require_string(*it, "document/notes");
  doc.root = parse_node(require_field(document, "root", "document"), "root");

  if (auto report = validate(*doc.root); !report.ok()) {
    std::ostringstream os;
    os << "network is invalid:";
    for (const auto& v : report.violations) os << "\n  " << v.path << ": " << v.message;
    throw ValidationError(os.str());
  }
  return doc;
}

NetworkDocument load_network(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw IoError("cannot open " + file.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_network(buffer.str());
}

std::string serialize_network(const NetworkDocument& doc) {
  std::ostringstream out;
  out << "{\n  \"format_version\": 1,\n  \"name\": ";
  write_json_string(out, doc.name);
  if (!doc.notes.empty()) {
    out << ",\n  \"notes\": ";
    write_json_string(out, doc.notes);
  }
  out << ",\n  \"root\": ";
  write_node(out, *doc.root, 1);
  out << "\n}\n";
  return out.str();
}

void save_network(const NetworkDocument& doc, const std::filesystem::path& file) {
  std::ofstream out(file, std::ios::binary);
  if (!out) throw IoError("cannot write " + file.string());
  out << serialize_network(doc);
  if (!out) throw IoError("failed writing " + file.string());
}

std::string format_value(double v) {
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "%.12g", v);
  return buffer;
}

std::string format_probability(double v) {
  if (v == static_cast<double>(static_cast<long long>(v))) {
    char buffer[32];
    std::snprintf(buffer, sizeof buffer, "%.1f", v);
    return buffer;
  }
  return format_value(v);
}

void write_samples_csv(std::ostream& out, std::span<const double> times) {
  out << "time\n";
  for (double t : times) out << format_value(t) << "\n";
}

void write_ecdf_csv(std::ostream& out, const EmpiricalDistribution& emp) {
  out << "time,cdf\n";
  const auto n = static_cast<double>(emp.count());
  for (std::size_t i = 0; i < emp.count(); ++i)
    out << format_value(emp.sorted()[i]) << ","
        << format_probability(static_cast<double>(i + 1) / n) << "\n";
}

void write_histogram_csv(std::ostream& out, std::span<const HistogramBin> bins) {
  out << "right_edge,count\n";
  for (const auto& bin : bins) out << format_value(bin.right_edge) << "," << bin.count << "\n";
}

void write_density_csv(std::ostream& out, const DensityEstimate& density) {
  out << "time,density\n";
  for (const auto& [t, f] : density.points)
    out << format_value(t) << "," << format_value(f) << "\n";
}

void write_oracle_cdf_csv(std::ostream& out, const DiscretizedDistribution& dist,
                          std::size_t stride) {
  if (stride < 1) stride = 1;
  out << "time,cdf\n";
  const std::size_t last = dist.size() - 1;
  auto row = [&](std::size_t k) {
    out << format_value(dist.grid_time(k)) << ","
        << format_probability(std::min(dist.cdf()[k], 1.0)) << "\n";
  };
  for (std::size_t k = 0; k <= last; k += stride) row(k);
  if (last % stride != 0) row(last);
}

std::vector<double> read_samples_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw IoError("samples file is empty");
  std::vector<double> values;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty()) continue;
    try {
      std::size_t used = 0;
      values.push_back(std::stod(line, &used));
      if (used != line.size()) throw std::invalid_argument(line);
    } catch (const std::exception&) {
      throw IoError("row " + std::to_string(row) + ": cannot parse '" + line + "' as a number");
    }
  }
  return values;
}

}  // namespace ndsan
