#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "ndsan/discretized.hpp"
#include "ndsan/empirical.hpp"
#include "ndsan/network.hpp"

namespace ndsan {

// On-disk network description. Serialization is canonical: fixed field
// order, shortest round-trip number formatting, one trailing newline --
// deserializing and reserializing a document is byte-stable.
struct NetworkDocument {
  int format_version = 1;
  std::string name;
  std::string notes;  // optional free-form description
  NodePtr root;
};

// Parse and validate. Throws SyntaxError (malformed text, with position),
// SchemaError (unknown node kind, missing or mistyped field) or
// ValidationError (structural violations, with paths).
NetworkDocument parse_network(const std::string& text);
NetworkDocument load_network(const std::filesystem::path& file);  // adds IoError

std::string serialize_network(const NetworkDocument& doc);
void save_network(const NetworkDocument& doc, const std::filesystem::path& file);

// Decimal with up to 12 significant digits.
std::string format_value(double v);
// Same, but integral probabilities keep one decimal (0.0, 1.0).
std::string format_probability(double v);

// Result exports: comma-separated text, one header row, '\n' terminators,
// deterministic for fixed inputs.
void write_samples_csv(std::ostream& out, std::span<const double> times);
void write_ecdf_csv(std::ostream& out, const EmpiricalDistribution& emp);
void write_histogram_csv(std::ostream& out, std::span<const HistogramBin> bins);
void write_density_csv(std::ostream& out, const DensityEstimate& density);
// Oracle cdf table (t, F) on the grid; stride > 1 decimates rows but always
// keeps the last grid point.
void write_oracle_cdf_csv(std::ostream& out, const DiscretizedDistribution& dist,
                          std::size_t stride = 1);

std::vector<double> read_samples_csv(std::istream& in);

}  // namespace ndsan
