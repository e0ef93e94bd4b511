#include "popsim/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "popsim/analysis.hpp"
#include "popsim/clock.hpp"
#include "popsim/dynamics.hpp"
#include "popsim/engine.hpp"
#include "popsim/fast.hpp"
#include "popsim/hitting.hpp"
#include "popsim/maxid.hpp"
#include "popsim/metrics.hpp"
#include "popsim/token.hpp"

namespace popsim {

using json = nlohmann::ordered_json;

namespace {

// Sub-seed indices reserved for auxiliary streams; trial indices stay below.
constexpr std::uint64_t kPilotStream = std::uint64_t{1} << 40;
constexpr std::uint64_t kCalibrationStream = kPilotStream + 1;
constexpr std::uint64_t kHittingStream = kPilotStream + 2;
constexpr std::uint64_t kMeetingStream = kPilotStream + 3;

constexpr ExperimentKind kKinds[] = {ExperimentKind::run_protocol,  ExperimentKind::measure_broadcast,
                                     ExperimentKind::measure_hitting, ExperimentKind::measure_clock,
                                     ExperimentKind::isolation,     ExperimentKind::scaling};
constexpr ProtocolKind kProtocols[] = {ProtocolKind::token, ProtocolKind::maxid, ProtocolKind::fast};

std::vector<std::string> split(std::string_view text, char sep) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  for (;;) {
    const std::size_t pos = text.find(sep, start);
    parts.emplace_back(text.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) return parts;
    start = pos + 1;
  }
}

template <class T>
T parse_number(const std::string& text, const std::string& field) {
  T value{};
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) throw ConfigError(field, "cannot parse '" + text + "' as a number");
  return value;
}

std::string fmt(double x) {
  if (!std::isfinite(x)) return "";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, ptr);
}

}  // namespace

std::string_view to_string(ExperimentKind kind) noexcept {
  switch (kind) {
    case ExperimentKind::run_protocol: return "run-protocol";
    case ExperimentKind::measure_broadcast: return "measure-broadcast";
    case ExperimentKind::measure_hitting: return "measure-hitting";
    case ExperimentKind::measure_clock: return "measure-clock";
    case ExperimentKind::isolation: return "isolation";
    case ExperimentKind::scaling: return "scaling";
  }
  return "unknown";
}

std::string_view to_string(ProtocolKind kind) noexcept {
  switch (kind) {
    case ProtocolKind::token: return "token";
    case ProtocolKind::maxid: return "maxid";
    case ProtocolKind::fast: return "fast";
  }
  return "unknown";
}

GraphSpec parse_graph_shorthand(std::string_view text) {
  const auto parts = split(text, ':');
  GraphSpec spec;
  spec.family = parts[0];
  const std::string field = "graph";
  auto need = [&](std::size_t lo, std::size_t hi) {
    if (parts.size() < lo || parts.size() > hi) {
      throw ConfigError(field, "malformed graph shorthand '" + std::string(text) + "'");
    }
  };
  if (spec.family == "file") {
    need(2, 2);
    spec.path = parts[1];
  } else if (spec.family == "renitent") {
    need(5, 8);
    std::string base = parts[1];
    for (std::size_t i = 2; i + 2 < parts.size(); ++i) base += ":" + parts[i];
    spec.base = base;
    spec.hub = parse_number<NodeId>(parts[parts.size() - 2], field);
    spec.ell = parse_number<std::uint32_t>(parts.back(), field);
  } else if (spec.family == "torus") {
    need(2, 2);
    for (const auto& d : split(parts[1], 'x')) spec.dims.push_back(parse_number<std::size_t>(d, field));
  } else if (spec.family == "gnp") {
    need(3, 4);
    spec.n = parse_number<std::size_t>(parts[1], field);
    spec.p = parse_number<double>(parts[2], field);
    if (parts.size() == 4) spec.seed = parse_number<std::uint64_t>(parts[3], field);
  } else if (spec.family == "lollipop") {
    need(3, 3);
    spec.n = parse_number<std::size_t>(parts[1], field);
    spec.tail = parse_number<std::size_t>(parts[2], field);
  } else {
    need(2, 2);
    spec.n = parse_number<std::size_t>(parts[1], field);
  }
  return spec;
}

std::string to_shorthand(const GraphSpec& spec) {
  if (spec.family == "file") return "file:" + spec.path;
  if (spec.family == "renitent") {
    return "renitent:" + spec.base + ":" + std::to_string(spec.hub) + ":" + std::to_string(spec.ell);
  }
  if (spec.family == "torus") {
    std::string dims;
    for (std::size_t i = 0; i < spec.dims.size(); ++i) dims += (i ? "x" : "") + std::to_string(spec.dims[i]);
    return "torus:" + dims;
  }
  if (spec.family == "gnp") {
    std::string s = "gnp:" + std::to_string(spec.n) + ":" + fmt(spec.p);
    if (spec.seed) s += ":" + std::to_string(*spec.seed);
    return s;
  }
  if (spec.family == "lollipop") return "lollipop:" + std::to_string(spec.n) + ":" + std::to_string(spec.tail);
  return spec.family + ":" + std::to_string(spec.n);
}

BuiltGraph build_graph(const GraphSpec& spec) {
  try {
    if (spec.family == "file") {
      std::ifstream in(spec.path);
      if (!in) throw ConfigError("graph.path", "cannot open '" + spec.path + "'");
      Graph g = read_edge_list(in);
      g.set_family("file");
      require_connected(g, "edge-list graph");
      return {std::move(g), "file", std::nullopt};
    }
    if (spec.family == "renitent") {
      const BuiltGraph base = build_graph(parse_graph_shorthand(spec.base));
      RenitentGraph r = generate_renitent(base.graph, spec.hub, spec.ell);
      r.graph.set_family("renitent");
      return {std::move(r.graph), "renitent", std::move(r.cover)};
    }
    const auto family = parse_graph_family(spec.family);
    if (!family) throw ConfigError("graph.family", "unknown graph family '" + spec.family + "'");
    GraphParams params{spec.n, spec.dims, spec.p, spec.tail, spec.seed};
    Graph g = generate(*family, params);
    return {std::move(g), spec.family, std::nullopt};
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError("graph", e.what());
  }
}

// ---------------------------------------------------------------------------
// Serialization

namespace {

json graph_to_json(const GraphSpec& s) {
  json j;
  j["family"] = s.family;
  if (s.n) j["n"] = s.n;
  if (!s.dims.empty()) j["dims"] = s.dims;
  if (s.p != 0.0) j["p"] = s.p;
  if (s.tail) j["tail"] = s.tail;
  if (s.seed) j["seed"] = *s.seed;
  if (!s.path.empty()) j["path"] = s.path;
  if (!s.base.empty()) j["base"] = s.base;
  if (s.family == "renitent") {
    j["hub"] = s.hub;
    j["ell"] = s.ell;
  }
  return j;
}

class Reader {
 public:
  Reader(const json& object, std::string prefix) : object_(object), prefix_(std::move(prefix)) {
    if (!object_.is_object()) throw ConfigError(prefix_, "expected a JSON object");
  }

  std::string path(const std::string& key) const { return prefix_.empty() ? key : prefix_ + "." + key; }

  bool has(const std::string& key) {
    seen_.push_back(key);
    return object_.contains(key) && !object_.at(key).is_null();
  }

  const json& at(const std::string& key) const { return object_.at(key); }

  template <class T>
  void get(const std::string& key, T& out) {
    if (!has(key)) return;
    out = convert<T>(object_.at(key), path(key));
  }

  template <class T>
  void get(const std::string& key, std::optional<T>& out) {
    if (!has(key)) return;
    out = convert<T>(object_.at(key), path(key));
  }

  void finish() const {
    for (auto it = object_.begin(); it != object_.end(); ++it) {
      if (std::find(seen_.begin(), seen_.end(), it.key()) == seen_.end()) {
        throw ConfigError(path(it.key()), "unknown key");
      }
    }
  }

  template <class T>
  static T convert(const json& v, const std::string& field) {
    if constexpr (std::is_same_v<T, bool>) {
      if (!v.is_boolean()) throw ConfigError(field, "expected a boolean");
      return v.get<bool>();
    } else if constexpr (std::is_same_v<T, std::string>) {
      if (!v.is_string()) throw ConfigError(field, "expected a string");
      return v.get<std::string>();
    } else if constexpr (std::is_floating_point_v<T>) {
      if (!v.is_number()) throw ConfigError(field, "expected a number");
      return v.get<T>();
    } else if constexpr (std::is_integral_v<T>) {
      if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned() && v.get<std::int64_t>() < 0)) {
        throw ConfigError(field, "expected a nonnegative integer");
      }
      const auto raw = v.get<std::uint64_t>();
      if (raw > std::numeric_limits<T>::max()) throw ConfigError(field, "integer out of range");
      return static_cast<T>(raw);
    } else {
      if (!v.is_array()) throw ConfigError(field, "expected an array");
      T out;
      for (std::size_t i = 0; i < v.size(); ++i) {
        out.push_back(convert<typename T::value_type>(v[i], field + "[" + std::to_string(i) + "]"));
      }
      return out;
    }
  }

 private:
  const json& object_;
  std::string prefix_;
  std::vector<std::string> seen_;
};

GraphSpec graph_from_json(const json& j) {
  if (j.is_string()) return parse_graph_shorthand(j.get<std::string>());
  Reader r(j, "graph");
  GraphSpec s;
  r.get("family", s.family);
  if (s.family.empty()) throw ConfigError("graph.family", "missing");
  r.get("n", s.n);
  r.get("dims", s.dims);
  r.get("p", s.p);
  r.get("tail", s.tail);
  r.get("seed", s.seed);
  r.get("path", s.path);
  r.get("base", s.base);
  r.get("hub", s.hub);
  r.get("ell", s.ell);
  r.finish();
  return s;
}

template <class Enum, std::size_t N>
Enum parse_enum(const std::string& text, const Enum (&values)[N], const std::string& field) {
  for (Enum e : values) {
    if (to_string(e) == text) return e;
  }
  throw ConfigError(field, "unknown value '" + text + "'");
}

json config_to_json(const ExperimentConfig& c) {
  json j;
  j["experiment_id"] = c.experiment_id;
  j["kind"] = std::string(to_string(c.kind));
  j["graph"] = graph_to_json(c.graph);
  j["protocol"] = std::string(to_string(c.protocol));
  j["trials"] = c.trials;
  j["master_seed"] = c.master_seed;
  j["max_steps"] = c.max_steps;
  if (c.tail_steps) j["tail_steps"] = *c.tail_steps;
  j["tau"] = c.tau;
  j["alpha"] = c.alpha;
  j["candidates"] = c.candidates;
  j["regular"] = c.regular;
  j["broadcast_trials"] = c.broadcast_trials;
  j["h"] = c.h;
  j["ell"] = c.ell;
  j["node"] = c.node;
  j["cover_mode"] = c.cover_mode;
  if (c.lambda) j["lambda"] = *c.lambda;
  j["pilot_trials"] = c.pilot_trials;
  j["measure"] = c.measure;
  j["sizes"] = c.sizes;
  j["output"] = c.output;
  return j;
}

}  // namespace

ExperimentConfig parse_config(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError("", std::string("invalid JSON: ") + e.what());
  }
  Reader r(doc, "");
  ExperimentConfig c;
  r.get("experiment_id", c.experiment_id);
  std::string kind = std::string(to_string(c.kind));
  r.get("kind", kind);
  c.kind = parse_enum(kind, kKinds, "kind");
  if (!r.has("graph")) throw ConfigError("graph", "missing");
  c.graph = graph_from_json(r.at("graph"));
  std::string protocol = std::string(to_string(c.protocol));
  r.get("protocol", protocol);
  c.protocol = parse_enum(protocol, kProtocols, "protocol");
  r.get("trials", c.trials);
  r.get("master_seed", c.master_seed);
  r.get("max_steps", c.max_steps);
  r.get("tail_steps", c.tail_steps);
  r.get("tau", c.tau);
  r.get("alpha", c.alpha);
  r.get("candidates", c.candidates);
  r.get("regular", c.regular);
  r.get("broadcast_trials", c.broadcast_trials);
  r.get("h", c.h);
  r.get("ell", c.ell);
  r.get("node", c.node);
  r.get("cover_mode", c.cover_mode);
  r.get("lambda", c.lambda);
  r.get("pilot_trials", c.pilot_trials);
  r.get("measure", c.measure);
  r.get("sizes", c.sizes);
  r.get("output", c.output);
  r.finish();

  if (c.trials < 1) throw ConfigError("trials", "must be at least 1");
  if (c.max_steps < 1) throw ConfigError("max_steps", "must be at least 1");
  if (!parse_candidate_pattern(c.candidates)) throw ConfigError("candidates", "expected all, half or one");
  if (c.cover_mode != "paper" && c.cover_mode != "disjoint_safe") {
    throw ConfigError("cover_mode", "expected paper or disjoint_safe");
  }
  if (c.kind == ExperimentKind::scaling) {
    if (c.sizes.empty()) throw ConfigError("sizes", "scaling needs at least one size");
    if (c.measure != "measure-broadcast" && c.measure != "run-protocol") {
      throw ConfigError("measure", "expected measure-broadcast or run-protocol");
    }
  }
  return c;
}

std::string serialize_config(const ExperimentConfig& config) { return config_to_json(config).dump(2); }

// ---------------------------------------------------------------------------
// Execution

namespace {

json stats_json(const SampleStats& s) {
  return json{{"count", s.count},   {"mean", s.mean},     {"stddev", s.stddev}, {"stderr", s.stderr_mean},
              {"ci95", s.ci95()},   {"min", s.min},       {"q05", s.q05},       {"q25", s.q25},
              {"median", s.median}, {"q75", s.q75},       {"q95", s.q95},       {"max", s.max}};
}

json bounds_json(const BoundReport& b) {
  json j{{"lower", b.lower}, {"upper_diam", b.upper_diam}};
  if (b.upper_expansion) j["upper_expansion"] = *b.upper_expansion;
  j["lambda0"] = b.lambda0;
  return j;
}

struct Context {
  const ExperimentConfig& config;
  const Graph& graph;
  std::string family;
  unsigned threads;
};

struct Section {
  std::string extra_header;
  std::vector<std::string> rows;
  json derived = json::object();
  json results = json::object();
  std::int64_t violations = 0;
  std::size_t failures = 0;
  double statistic = 0.0;  ///< headline number used by scaling
};

std::string row_prefix(const Context& ctx, std::uint64_t seed, std::string_view protocol) {
  std::ostringstream os;
  os << ctx.config.experiment_id << ',' << ctx.family << ',' << ctx.graph.node_count() << ','
     << ctx.graph.edge_count() << ',' << seed << ',' << protocol;
  return os.str();
}

template <class P>
void collect_trials(const Context& ctx, const P& protocol, Section& out) {
  const auto& c = ctx.config;
  TrialOptions options;
  options.trials = c.trials;
  options.master_seed = c.master_seed;
  options.run.max_steps = c.max_steps;
  options.run.tail_steps = c.tail_steps;
  options.threads = ctx.threads;
  const TrialBatch batch = run_trials(ctx.graph, protocol, options);
  const std::string_view name = to_string(c.protocol);
  for (const auto& r : batch.results) {
    std::string row = row_prefix(ctx, r.seed, name) + ",";
    if (r.stabilization_step) row += std::to_string(*r.stabilization_step);
    row += ",";
    if (r.leader_node) row += std::to_string(*r.leader_node) + "," + std::to_string(r.leader_degree);
    else row += ",";
    out.rows.push_back(std::move(row));
  }
  const TrialSummary& s = batch.summary;
  out.results["trials"] = s.trials;
  out.results["stabilized"] = s.stabilized;
  out.results["failures"] = s.failures;
  out.results["invariant_violations"] = s.invariant_violations;
  out.results["steps_to_stable"] = stats_json(s.steps);
  json counters = json::object();
  for (const auto& [k, v] : s.counters) counters[k] = v;
  out.results["counters"] = counters;
  out.violations += s.invariant_violations;
  out.failures += s.failures;
  out.statistic = s.steps.mean;
}

Section run_protocol_section(const Context& ctx) {
  const auto& c = ctx.config;
  const Graph& g = ctx.graph;
  Section out;
  const auto pattern = *parse_candidate_pattern(c.candidates);
  switch (c.protocol) {
    case ProtocolKind::token: {
      collect_trials(ctx, TokenProtocol(make_candidates(g.node_count(), pattern)), out);
      out.derived["state_count"] = 6;
      break;
    }
    case ProtocolKind::maxid: {
      const unsigned k = maxid_params(g.node_count(), c.regular);
      out.derived["k"] = k;
      out.derived["state_count"] = maxid_state_count(k);
      collect_trials(ctx, MaxIdProtocol(k), out);
      break;
    }
    case ProtocolKind::fast: {
      const BroadcastEstimate pilot = estimate_worst_broadcast(
          g, c.broadcast_trials, derive_seed(c.master_seed, kPilotStream), {}, ctx.threads);
      FastParams params;
      try {
        params = fast_params(pilot.b_hat, g.max_degree(), g.edge_count(), g.node_count(), c.tau, c.alpha);
      } catch (const std::invalid_argument& e) {
        throw ConfigError("tau", e.what());
      }
      out.derived["B_hat"] = pilot.b_hat;
      out.derived["B_hat_ci"] = pilot.ci;
      out.derived["h"] = params.h;
      out.derived["L"] = params.L;
      out.derived["Lmax"] = params.Lmax;
      out.derived["state_count"] = fast_state_count(params);
      std::vector<bool> candidates;
      if (pattern != CandidatePattern::all) candidates = make_candidates(g.node_count(), pattern);
      collect_trials(ctx, FastProtocol(params, std::move(candidates)), out);
      break;
    }
  }
  return out;
}

Section measure_broadcast_section(const Context& ctx) {
  const auto& c = ctx.config;
  Section out;
  out.extra_header = ",source,mean,ci";
  const BroadcastEstimate est = estimate_worst_broadcast(ctx.graph, c.broadcast_trials, c.master_seed, {}, ctx.threads);
  for (const auto& e : est.per_source) {
    out.rows.push_back(row_prefix(ctx, derive_seed(c.master_seed, e.source), "") + ",,,," + std::to_string(e.source) +
                       "," + fmt(e.steps.mean) + "," + fmt(e.steps.ci95()));
  }
  out.results["B_hat"] = est.b_hat;
  out.results["ci"] = est.ci;
  out.results["sigma"] = est.sigma;
  out.results["argmax"] = est.argmax;
  out.results["sources"] = est.per_source.size();
  out.statistic = est.b_hat;
  return out;
}

Section measure_hitting_section(const Context& ctx) {
  const auto& c = ctx.config;
  const Graph& g = ctx.graph;
  if (c.trials < 2) throw ConfigError("trials", "measure-hitting needs at least two trials");
  Section out;
  out.extra_header = ",quantity,u,v,mean,ci";
  const HittingTable classic = classic_hitting_table(g);
  const HittingTable population = population_hitting_table(g);
  const auto [u, v] = population.worst_pair;
  const SampleStats h = population_hitting_mc(g, u, v, c.trials, derive_seed(c.master_seed, kHittingStream), ctx.threads);
  const SampleStats m = meeting_time_mc(g, u, v, c.trials, derive_seed(c.master_seed, kMeetingStream), ctx.threads);
  auto row = [&](std::string_view q, std::uint64_t seed, const SampleStats& s) {
    out.rows.push_back(row_prefix(ctx, seed, "") + ",,,," + std::string(q) + "," + std::to_string(u) + "," +
                       std::to_string(v) + "," + fmt(s.mean) + "," + fmt(s.ci95()));
  };
  row("population_hitting", derive_seed(c.master_seed, kHittingStream), h);
  row("meeting", derive_seed(c.master_seed, kMeetingStream), m);
  const double n = static_cast<double>(g.node_count());
  out.results["classic_hitting_worst"] = classic.worst;
  out.results["classic_residual"] = classic.max_residual;
  out.results["population_hitting_exact_worst"] = population.worst;
  out.results["worst_pair"] = json::array({u, v});
  out.results["H_hat"] = stats_json(h);
  out.results["M_hat"] = stats_json(m);
  const double walk_bound = 27.0 * n * classic.worst;
  out.results["walk_bound"] = walk_bound;
  out.results["walk_bound_ok"] = h.mean <= walk_bound + 3.0 * h.stderr_mean;
  out.results["meeting_bound_ok"] = m.mean <= 2.0 * h.mean + 3.0 * std::hypot(m.stderr_mean, 2.0 * h.stderr_mean);
  out.statistic = h.mean;
  return out;
}

Section measure_clock_section(const Context& ctx) {
  const auto& c = ctx.config;
  const Graph& g = ctx.graph;
  Section out;
  out.extra_header = ",h,ell,mean_R,mean_S";
  StreakSteps steps;
  StreakExpectationCheck check;
  try {
    steps = measure_streak_steps(g, c.node, c.h, c.ell, c.trials, c.master_seed, ctx.threads);
    check = check_streak_expectation(c.h);
  } catch (const std::logic_error& e) {
    throw ConfigError("h", e.what());
  }
  out.rows.push_back(row_prefix(ctx, c.master_seed, "") + ",,,," + std::to_string(c.h) + "," + std::to_string(c.ell) +
                     "," + fmt(steps.R.mean) + "," + fmt(steps.S.mean));
  const double ek = check.closed_form;
  out.derived["expected_K"] = ek;
  out.results["recurrence_sum"] = check.recurrence_sum;
  out.results["relative_error"] = check.relative_error;
  out.results["R"] = stats_json(steps.R);
  out.results["S"] = stats_json(steps.S);
  out.results["expected_R"] = ek * static_cast<double>(c.ell);
  out.results["expected_S"] = ek * static_cast<double>(c.ell) * static_cast<double>(g.edge_count()) /
                              static_cast<double>(g.degree(c.node));
  out.statistic = steps.S.mean;
  return out;
}

Section isolation_section(const Context& ctx, const std::optional<Cover>& built_cover) {
  const auto& c = ctx.config;
  const Graph& g = ctx.graph;
  Section out;
  out.extra_header = ",t,isolated,trials,fraction";
  Cover cover;
  if (built_cover) {
    cover = *built_cover;
  } else if (ctx.family == "cycle") {
    try {
      cover = cycle_cover(g, c.cover_mode == "paper" ? CycleCoverMode::paper : CycleCoverMode::disjoint_safe);
    } catch (const std::invalid_argument& e) {
      throw ConfigError("graph", e.what());
    }
  } else {
    throw ConfigError("graph.family", "isolation needs a cycle or renitent graph");
  }
  const CoverReport report = verify_cover(g, cover);
  out.results["cover"] = json{{"sets", cover.size()},
                              {"radius", cover.radius},
                              {"union_ok", report.union_ok},
                              {"sizes_ok", report.sizes_ok},
                              {"iso_ok", report.iso_ok},
                              {"disjoint_ok", report.disjoint_ok}};
  if (!report.ok()) ++out.violations;

  double lambda = 0.0;
  if (c.lambda) {
    lambda = *c.lambda;
    out.derived["lambda_source"] = "config";
  } else {
    const IsolationCalibration cal = calibrate_isolation(g, cover, c.pilot_trials,
                                                         derive_seed(c.master_seed, kCalibrationStream), 0.5, ctx.threads);
    lambda = cal.lambda;
    out.derived["lambda_source"] = "pilot";
    out.derived["pilot_median"] = cal.pilot_median;
    out.derived["pilot_trials"] = cal.pilot_trials;
  }
  const double scale = static_cast<double>(cover.radius) * static_cast<double>(g.edge_count());
  const auto t = static_cast<std::uint64_t>(std::max(1.0, std::ceil(lambda * scale)));
  out.derived["lambda"] = lambda;
  out.derived["t"] = t;
  const IsolationEstimate est = isolation_probability(g, cover, t, c.trials, c.master_seed, ctx.threads);
  out.rows.push_back(row_prefix(ctx, c.master_seed, "") + ",,,," + std::to_string(t) + "," +
                     std::to_string(est.isolated) + "," + std::to_string(est.trials) + "," + fmt(est.fraction));
  out.results["fraction"] = est.fraction;
  out.results["wilson"] = json::array({est.wilson.lo, est.wilson.hi});
  out.results["t_isolating"] = est.fraction >= 0.5;
  out.statistic = est.fraction;
  return out;
}

Section run_section(const Context& ctx, ExperimentKind kind, const std::optional<Cover>& cover) {
  switch (kind) {
    case ExperimentKind::run_protocol: return run_protocol_section(ctx);
    case ExperimentKind::measure_broadcast: return measure_broadcast_section(ctx);
    case ExperimentKind::measure_hitting: return measure_hitting_section(ctx);
    case ExperimentKind::measure_clock: return measure_clock_section(ctx);
    case ExperimentKind::isolation: return isolation_section(ctx, cover);
    case ExperimentKind::scaling: break;
  }
  throw ConfigError("kind", "scaling cannot be nested");
}

json graph_json(const Graph& g, const std::string& family) {
  const GraphMetrics metrics = compute_metrics(g, g.node_count() <= kDefaultExactExpansionLimit);
  json j{{"family", family},
         {"n", metrics.n},
         {"m", metrics.m},
         {"diameter", metrics.diameter},
         {"max_degree", metrics.max_degree},
         {"min_degree", metrics.min_degree}};
  if (metrics.edge_expansion) j["edge_expansion"] = metrics.edge_expansion->value();
  if (metrics.n >= 2) j["bounds"] = bounds_json(broadcast_bounds(metrics));
  return j;
}

}  // namespace

ExperimentOutput run_experiment(const ExperimentConfig& config, unsigned threads) {
  json summary;
  summary["config"] = config_to_json(config);
  ExperimentOutput result;
  std::string header(kCsvHeader);
  std::vector<std::string> rows;

  if (config.kind != ExperimentKind::scaling) {
    const BuiltGraph built = build_graph(config.graph);
    const Context ctx{config, built.graph, built.family, threads};
    Section s = run_section(ctx, config.kind, built.cover);
    header += s.extra_header;
    rows = std::move(s.rows);
    summary["graph"] = graph_json(built.graph, built.family);
    summary["derived"] = std::move(s.derived);
    summary["results"] = std::move(s.results);
    result.invariant_violations = s.violations;
    result.failures = s.failures;
  } else {
    const ExperimentKind inner = config.measure == "run-protocol" ? ExperimentKind::run_protocol
                                                                  : ExperimentKind::measure_broadcast;
    header += ",statistic,normalized";
    json points = json::array();
    std::vector<double> stats, normalized;
    for (std::size_t i = 0; i < config.sizes.size(); ++i) {
      ExperimentConfig sub = config;
      sub.kind = inner;
      sub.graph.n = config.sizes[i];
      sub.master_seed = derive_seed(config.master_seed, i);
      const BuiltGraph built = build_graph(sub.graph);
      const Context ctx{sub, built.graph, built.family, threads};
      Section s = run_section(ctx, inner, built.cover);
      const double n = static_cast<double>(built.graph.node_count());
      const double norm = inner == ExperimentKind::run_protocol ? s.statistic / (n * std::log2(n) * std::log2(n))
                                                                : s.statistic / (n * std::log(n));
      stats.push_back(s.statistic);
      normalized.push_back(norm);
      const std::string protocol = inner == ExperimentKind::run_protocol ? std::string(to_string(sub.protocol)) : "";
      rows.push_back(row_prefix(ctx, sub.master_seed, protocol) + ",,,," + fmt(s.statistic) + "," + fmt(norm));
      points.push_back(json{{"n", built.graph.node_count()},
                            {"m", built.graph.edge_count()},
                            {"seed", sub.master_seed},
                            {"statistic", s.statistic},
                            {"normalized", norm},
                            {"derived", s.derived},
                            {"results", s.results}});
      result.invariant_violations += s.violations;
      result.failures += s.failures;
    }
    json ratios = json::array();
    for (std::size_t i = 1; i < stats.size(); ++i) ratios.push_back(stats[i] / stats[i - 1]);
    const auto [lo, hi] = std::minmax_element(normalized.begin(), normalized.end());
    summary["points"] = points;
    summary["results"] = json{{"statistic", inner == ExperimentKind::run_protocol ? "mean steps_to_stable" : "B_hat"},
                              {"normalization", inner == ExperimentKind::run_protocol ? "n log2(n)^2" : "n ln(n)"},
                              {"ratios", ratios},
                              {"normalized_spread", *hi / *lo}};
  }

  std::string csv = header + "\n";
  for (const auto& r : rows) csv += r + "\n";
  result.csv = std::move(csv);
  summary["invariant_violations"] = result.invariant_violations;
  summary["failures"] = result.failures;
  result.summary_json = summary.dump(2) + "\n";
  return result;
}

void write_outputs(const ExperimentOutput& out, const std::string& output_prefix) {
  for (const auto& [suffix, text] : {std::pair{".csv", &out.csv}, std::pair{".json", &out.summary_json}}) {
    const std::string path = output_prefix + suffix;
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open '" + path + "' for writing");
    f << *text;
    if (!f) throw std::runtime_error("failed writing '" + path + "'");
  }
}

}  // namespace popsim
