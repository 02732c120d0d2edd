#pragma once

// Named experiments behind the command line tool. A config is a flat list of
// `key = value` lines; every key an experiment reads has a default, and the
// effective set is echoed in full into the report.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace strichartz::harness {

/// Bad command line or config. Raised before anything is written.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

const std::vector<std::string>& experiment_names();
bool is_experiment(const std::string& name);

struct ExperimentConfig {
  std::string experiment;
  /// Raw text of every key; ordered so the echo is stable.
  std::map<std::string, std::string> values;

  const std::string& text(const std::string& key) const;
  double number(const std::string& key) const;
  long integer(const std::string& key) const;
  std::uint64_t seed() const;
  std::vector<double> list(const std::string& key) const;

  bool operator==(const ExperimentConfig&) const = default;
};

/// All keys of an experiment at their defaults. Throws UsageError for an
/// unknown experiment.
ExperimentConfig default_config(const std::string& experiment);

/// Overlays the file on the defaults. Unknown or duplicate keys, unparsable
/// values, and a missing grid.n / grid.x_min / grid.x_max (for experiments
/// with a grid) are usage errors.
ExperimentConfig parse_config(const std::string& experiment, std::istream& in);

/// `key = value` lines; parse_config of the result gives back the same config.
std::string serialize(const ExperimentConfig& config);

/// Types and ranges of every value. Throws UsageError.
void validate(const ExperimentConfig& config);

struct Check {
  /// Acceptance criterion, "AC1" .. "AC9".
  std::string criterion;
  std::string name;
  bool passed = false;
  double value = 0.0;
  double threshold = 0.0;
  /// "<=", ">=", "<", "==" ...
  std::string relation;
};

struct OutputFile {
  std::string name;
  std::string contents;
};

struct ExperimentReport {
  ExperimentConfig config;
  /// JSON object text of scalar results.
  std::string results_json;
  std::vector<Check> checks;
  /// Wall-clock checks; kept out of the deterministic body.
  std::vector<Check> runtime_checks;
  std::vector<OutputFile> files;
  std::vector<std::string> warnings;
  double wall_seconds = 0.0;

  bool passed() const;
  /// report.json: everything except wall-clock data, byte-stable for a given config.
  std::string body() const;
  /// timing.json
  std::string timing(const std::filesystem::path& out_dir) const;
};

ExperimentReport run(const ExperimentConfig& config);

/// Writes report.json, timing.json and the data files into out_dir.
void write_outputs(const ExperimentReport& report, const std::filesystem::path& out_dir);

}  // namespace strichartz::harness
