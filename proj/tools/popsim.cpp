#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <sstream>

#include "popsim/analysis.hpp"
#include "popsim/experiment.hpp"
#include "popsim/metrics.hpp"
#include "popsim/suite.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kInvariantFailure = 1;
constexpr int kConfigError = 2;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw popsim::ConfigError("config", "cannot open '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

popsim::GraphSpec graph_argument(const std::string& text) {
  if (text.ends_with(".json")) {
    const auto doc = nlohmann::json::parse(read_file(text));
    if (doc.is_string()) return popsim::parse_graph_shorthand(doc.get<std::string>());
    // Reuse the config parser for object specs.
    nlohmann::json config{{"graph", doc}};
    return popsim::parse_config(config.dump()).graph;
  }
  return popsim::parse_graph_shorthand(text);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Population protocol simulator and experiment harness"};
  app.require_subcommand(1);

  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> trials;
  std::optional<std::uint64_t> max_steps;
  std::string out;
  unsigned threads = 1;

  auto* run = app.add_subcommand("run", "Run an experiment from a JSON config");
  std::string config_path;
  run->add_option("config", config_path, "Experiment config (JSON)")->required();
  run->add_option("--seed", seed, "Override master_seed");
  run->add_option("--trials", trials, "Override trials");
  run->add_option("--max-steps", max_steps, "Override max_steps");
  run->add_option("--out", out, "Output prefix; writes <prefix>.csv and <prefix>.json");
  run->add_option("--threads", threads, "Worker threads")->check(CLI::PositiveNumber);

  auto* suite = app.add_subcommand("suite", "Run the invariant suite");
  bool corrupt = false;
  suite->add_option("--seed", seed, "Seed for the randomized checks");
  suite->add_option("--threads", threads, "Worker threads")->check(CLI::PositiveNumber);
  suite->add_flag("--corrupt-token-rule", corrupt, "Inject a broken token rule (mutation check)");

  auto* bounds = app.add_subcommand("bounds", "Print broadcast-time bounds for a graph");
  std::string bounds_graph;
  bounds->add_option("graph", bounds_graph, "Graph shorthand (e.g. cycle:16) or JSON file")->required();
  bounds->add_option("--out", out, "Write the JSON report here instead of stdout");

  auto* gen = app.add_subcommand("gen", "Write a generated graph as an edge list");
  std::string gen_graph;
  gen->add_option("graph", gen_graph, "Graph shorthand (e.g. gnp:30:0.3:7) or JSON file")->required();
  gen->add_option("--out", out, "Output file (stdout if omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    if (*run) {
      popsim::ExperimentConfig config = popsim::parse_config(read_file(config_path));
      if (seed) config.master_seed = *seed;
      if (trials) config.trials = *trials;
      if (max_steps) config.max_steps = *max_steps;
      if (!out.empty()) config.output = out;
      const auto result = popsim::run_experiment(config, threads);
      if (config.output.empty()) {
        std::cout << result.summary_json;
      } else {
        popsim::write_outputs(result, config.output);
      }
      if (result.invariant_violations > 0) {
        std::cerr << "invariant violations: " << result.invariant_violations << '\n';
        return kInvariantFailure;
      }
      return kOk;
    }

    if (*suite) {
      popsim::SuiteOptions options;
      if (seed) options.seed = *seed;
      options.threads = threads;
      options.corrupt_token_rule = corrupt;
      const auto report = popsim::run_invariant_suite(options);
      for (const auto& c : report.checks) {
        std::cout << (c.passed ? "PASS " : "FAIL ") << c.name;
        if (!c.detail.empty()) std::cout << " (" << c.detail << ")";
        std::cout << '\n';
      }
      return report.passed() ? kOk : kInvariantFailure;
    }

    if (*bounds) {
      const auto built = popsim::build_graph(graph_argument(bounds_graph));
      const auto metrics = popsim::compute_metrics(built.graph, built.graph.node_count() <= popsim::kDefaultExactExpansionLimit);
      const auto report = popsim::broadcast_bounds(metrics);
      nlohmann::ordered_json j{{"family", built.family},
                               {"n", metrics.n},
                               {"m", metrics.m},
                               {"diameter", metrics.diameter},
                               {"max_degree", metrics.max_degree},
                               {"lower", report.lower},
                               {"upper_diam", report.upper_diam}};
      if (metrics.edge_expansion) j["edge_expansion"] = metrics.edge_expansion->value();
      if (report.upper_expansion) j["upper_expansion"] = *report.upper_expansion;
      j["lambda0"] = report.lambda0;
      const std::string text = j.dump(2) + "\n";
      if (out.empty()) {
        std::cout << text;
      } else {
        std::ofstream f(out);
        if (!(f << text)) throw std::runtime_error("cannot write '" + out + "'");
      }
      return kOk;
    }

    if (*gen) {
      const auto built = popsim::build_graph(graph_argument(gen_graph));
      if (out.empty()) {
        popsim::write_edge_list(std::cout, built.graph);
      } else {
        std::ofstream f(out);
        popsim::write_edge_list(f, built.graph);
        if (!f) throw std::runtime_error("cannot write '" + out + "'");
      }
      return kOk;
    }
  } catch (const popsim::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kConfigError;
  }
  return kOk;
}
