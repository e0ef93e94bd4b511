#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "popsim/cover.hpp"
#include "popsim/generators.hpp"
#include "popsim/graph.hpp"

namespace popsim {

/// A configuration value that failed validation. `field` names the JSON
/// path of the offending entry, e.g. "graph.n".
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, const std::string& message)
      : std::runtime_error(field.empty() ? message : field + ": " + message), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

enum class ExperimentKind { run_protocol, measure_broadcast, measure_hitting, measure_clock, isolation, scaling };
enum class ProtocolKind { token, maxid, fast };

std::string_view to_string(ExperimentKind kind) noexcept;
std::string_view to_string(ProtocolKind kind) noexcept;

/// Graph description. `family` is a generator family name, "renitent", or
/// "file" (edge list at `path`). Renitent graphs wrap `base` with `hub` and `ell`.
struct GraphSpec {
  std::string family;
  std::size_t n = 0;
  std::vector<std::size_t> dims;
  double p = 0.0;
  std::size_t tail = 0;
  std::optional<std::uint64_t> seed;
  std::string path;
  std::string base;  ///< shorthand of the renitent base graph
  NodeId hub = 0;
  std::uint32_t ell = 0;

  friend bool operator==(const GraphSpec&, const GraphSpec&) = default;
};

/// Parses "family:args", e.g. "cycle:16", "gnp:30:0.3:7", "torus:4x4",
/// "lollipop:20:10", "renitent:clique:4:0:3" or "file:graph.txt".
GraphSpec parse_graph_shorthand(std::string_view text);
std::string to_shorthand(const GraphSpec& spec);

struct BuiltGraph {
  Graph graph;
  std::string family;
  std::optional<Cover> cover;  ///< set for renitent graphs
};

BuiltGraph build_graph(const GraphSpec& spec);

struct ExperimentConfig {
  std::string experiment_id = "experiment";
  ExperimentKind kind = ExperimentKind::run_protocol;
  GraphSpec graph;
  ProtocolKind protocol = ProtocolKind::token;
  std::size_t trials = 100;
  std::uint64_t master_seed = 0;
  std::uint64_t max_steps = 10'000'000;
  std::optional<std::uint64_t> tail_steps;
  double tau = 1.0;
  unsigned alpha = 8;
  std::string candidates = "all";
  bool regular = false;  ///< maxid: use the regular-graph k
  /// Broadcast trials per source for the pilot estimate (fast protocol) and
  /// for measure-broadcast.
  std::size_t broadcast_trials = 200;
  // measure-clock
  unsigned h = 3;
  std::size_t ell = 8;
  NodeId node = 0;
  // isolation
  std::string cover_mode = "disjoint_safe";
  std::optional<double> lambda;
  std::size_t pilot_trials = 200;
  // scaling
  std::string measure = "measure-broadcast";
  std::vector<std::size_t> sizes;
  std::string output;

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

/// Parses a JSON document; unknown keys and bad values raise ConfigError.
ExperimentConfig parse_config(std::string_view json_text);
/// Canonical JSON form; parse_config(serialize_config(c)) == c.
std::string serialize_config(const ExperimentConfig& config);

struct ExperimentOutput {
  std::string csv;
  std::string summary_json;
  std::int64_t invariant_violations = 0;
  std::size_t failures = 0;
};

/// Fixed leading CSV columns of every row.
inline constexpr std::string_view kCsvHeader =
    "experiment_id,graph_family,n,m,seed,protocol,steps_to_stable,leader_node,leader_degree";

/// Runs the experiment. The thread count affects speed only; outputs are
/// byte-identical for every value.
ExperimentOutput run_experiment(const ExperimentConfig& config, unsigned threads = 1);

/// Writes `<output>.csv` and `<output>.json`. Throws std::runtime_error when
/// a file cannot be written.
void write_outputs(const ExperimentOutput& out, const std::string& output_prefix);

}  // namespace popsim
