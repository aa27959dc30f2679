#include "cli.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "splitcp/csv.hpp"
#include "splitcp/detect.hpp"
#include "splitcp/error.hpp"
#include "splitcp/ingest.hpp"
#include "splitcp/report.hpp"
#include "splitcp/seeding.hpp"
#include "splitcp/simgen.hpp"
#include "splitcp/stabilization.hpp"

namespace splitcp::cli {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

constexpr const char* kVersion = "0.1.0";
constexpr const char* kManifestName = "manifest.json";

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::io_error, "cannot open " + path.string());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::io_error, "cannot write " + path.string());
  out << text;
  if (!out) throw Error(Errc::io_error, "write failed for " + path.string());
}

void require_readable(const fs::path& path) {
  if (!fs::exists(path)) throw Error(Errc::io_error, "no such file: " + path.string());
}

std::string utc_now() {
  auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// Records what a command read and wrote; serialized last into manifest.json.
struct RunManifest {
  std::string command;
  ordered_json parameters = ordered_json::object();
  std::vector<std::string> inputs;
  std::vector<std::string> outputs;
  fs::path output_dir;
  std::string started_at = utc_now();

  void write() const {
    ordered_json j;
    j["command"] = command;
    j["tool_version"] = kVersion;
    j["parameters"] = parameters;
    j["inputs"] = inputs;
    j["output_dir"] = output_dir.string();
    j["outputs"] = outputs;
    j["started_at"] = started_at;
    j["finished_at"] = utc_now();
    write_file(output_dir / kManifestName, j.dump(2) + "\n");
  }

  void emit(const std::string& name, const std::string& text) {
    write_file(output_dir / name, text);
    outputs.push_back(name);
  }
};

// Flags mirroring DetectionConfig. Precedence: built-in defaults, then the
// config file (--config or $SPLITCP_CONFIG), then explicit flags.
struct ConfigFlags {
  double alpha = 0.05;
  double delta = 0.0;
  std::string test = "auto";
  std::size_t min_segment = 50;
  std::size_t min_side = 0;
  std::int64_t n_perm = 2000;
  std::int64_t exact_limit = 20000;
  std::uint64_t seed = 0;
  bool no_split = false;
  std::string correction = "none";
  std::string config_path;

  std::map<std::string, CLI::Option*> opts;

  void add_to(CLI::App& app) {
    opts["alpha"] = app.add_option("--alpha", alpha, "Significance level");
    opts["delta"] = app.add_option("--delta", delta, "Shift parameter for the permutation null");
    opts["test"] = app.add_option("--test", test, "fisher_exact | permutation_shift | auto")
                        ->check(CLI::IsMember({"fisher_exact", "fisher", "permutation_shift",
                                               "permutation", "auto"}));
    opts["min_segment"] = app.add_option("--min-segment", min_segment, "Minimum segment length m");
    opts["min_side"] = app.add_option("--min-side", min_side, "Minimum side size in the lambda scan");
    opts["n_perm"] = app.add_option("--n-perm", n_perm, "Monte Carlo permutations");
    opts["exact_limit"] =
        app.add_option("--exact-limit", exact_limit, "Largest relabeling count enumerated exactly");
    opts["seed"] = app.add_option("--seed", seed, "Base random seed");
    opts["no_split"] = app.add_flag("--no-split", no_split, "Disable split-sample inference");
    opts["correction"] = app.add_option("--correction", correction, "none | bonferroni")
                              ->check(CLI::IsMember({"none", "bonferroni"}));
    app.add_option("--config", config_path, "JSON file of config defaults");
  }

  [[nodiscard]] bool given(const std::string& name) const { return opts.at(name)->count() > 0; }

  DetectionConfig resolve(RunManifest& manifest) const {
    DetectionConfig cfg;
    std::string path = config_path;
    if (path.empty()) {
      if (const char* env = std::getenv(kConfigEnvVar)) path = env;
    }
    if (!path.empty()) {
      cfg = report::config_from_json(read_file(path), cfg);
      manifest.inputs.push_back(path);
    }
    if (given("alpha")) cfg.alpha = alpha;
    if (given("delta")) cfg.delta = delta;
    if (given("test")) cfg.test = parse_test_choice(test);
    if (given("min_segment")) cfg.min_segment = min_segment;
    if (given("min_side")) cfg.min_side = min_side;
    if (given("n_perm")) cfg.n_perm = n_perm;
    if (given("exact_limit")) cfg.exact_limit = exact_limit;
    if (given("seed")) cfg.seed = seed;
    if (given("no_split")) cfg.use_split = !no_split;
    if (given("correction")) cfg.correction = parse_correction(correction);
    return cfg;
  }
};

void prepare_output_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(Errc::io_error, "cannot create " + dir.string() + ": " + ec.message());
}

// ---------------------------------------------------------------- stabilize

struct StabilizeArgs {
  std::string cohort;
  std::string events;
  std::string metric = "metric";
  std::string out = "out";
  double alpha = 0.05;
  double lower = 0.0;
  double upper = 1.0;
  bool union_bound = false;
  std::int64_t min_trials = 0;
};

int cmd_stabilize(const StabilizeArgs& a, std::ostream& out) {
  if (!(a.alpha > 0.0 && a.alpha < 1.0))
    throw Error(Errc::alpha_out_of_range, "alpha must lie in (0, 1)");
  if (!(a.lower < a.upper)) throw Error(Errc::invalid_argument, "--lower must be below --upper");

  RunManifest manifest;
  manifest.command = "stabilize";
  manifest.output_dir = a.out;
  manifest.parameters = {{"alpha", a.alpha},     {"lower", a.lower},
                         {"upper", a.upper},     {"union_bound", a.union_bound},
                         {"min_trials", a.min_trials}};

  require_readable(a.cohort);
  std::ifstream in(a.cohort);
  csv::Reader reader(in);
  auto pcol = reader.column("player");
  auto scol = reader.column("successes");
  auto tcol = reader.column("trials");
  auto mcol = reader.column("metric");
  if (!pcol || !scol || !tcol)
    throw Error(Errc::missing_column, a.cohort + ": need player,successes,trials");
  std::map<std::string, std::vector<PlayerCounts>> by_metric;
  while (auto rec = reader.next()) {
    const auto& f = rec->fields;
    if (f.size() != reader.header().size())
      throw Error(Errc::parse_error, a.cohort + " line " + std::to_string(rec->line) +
                                         ": wrong field count");
    PlayerCounts pc;
    try {
      pc.successes = std::stoll(f[*scol]);
      pc.trials = std::stoll(f[*tcol]);
    } catch (const std::exception&) {
      throw Error(Errc::parse_error, a.cohort + " line " + std::to_string(rec->line) +
                                         ": counts must be integers");
    }
    if (pc.trials < a.min_trials) continue;
    by_metric[mcol ? f[*mcol] : a.metric].push_back(pc);
  }
  manifest.inputs.push_back(a.cohort);

  std::string table = stabilization_csv_header() + "\n";
  for (const auto& [metric, players] : by_metric) {
    auto row = cohort_stabilization(players, metric);
    table += to_csv_row(row) + "\n";
    out << metric << ": n_stable = " << row.n_stable << " (" << row.player_count
        << " players)\n";
  }

  std::string sequences;
  if (!a.events.empty()) {
    require_readable(a.events);
    std::ifstream ev(a.events);
    csv::Reader er(ev);
    auto ecol = er.column("entity_id");
    auto vcol = er.column("value");
    auto emcol = er.column("metric");
    if (!ecol || !vcol) throw Error(Errc::missing_column, a.events + ": need entity_id,value");
    std::map<std::pair<std::string, std::string>, std::vector<double>> streams;
    while (auto rec = er.next()) {
      const auto& f = rec->fields;
      if (f.size() != er.header().size())
        throw Error(Errc::parse_error, a.events + " line " + std::to_string(rec->line) +
                                           ": wrong field count");
      double v = 0.0;
      try {
        v = std::stod(f[*vcol]);
      } catch (const std::exception&) {
        throw Error(Errc::parse_error, a.events + " line " + std::to_string(rec->line) +
                                           ": value is not a number");
      }
      streams[{f[*ecol], emcol ? f[*emcol] : a.metric}].push_back(v);
    }
    manifest.inputs.push_back(a.events);
    ConfidenceSequenceOptions opts;
    opts.alpha = a.alpha;
    opts.bounds = {a.lower, a.upper};
    opts.union_bound = a.union_bound;
    sequences = report::interval_csv_header() + "\n";
    for (auto& [key, values] : streams) {
      auto series = MetricSeries::create(std::move(values), SeriesKind::continuous, key.first,
                                         key.second);
      for (const auto& ci : confidence_sequence(series, opts))
        sequences += report::to_csv_row(key.first, key.second, ci) + "\n";
    }
  }

  prepare_output_dir(a.out);
  manifest.emit("stabilization.csv", table);
  if (!sequences.empty()) manifest.emit("confidence_sequence.csv", sequences);
  manifest.write();
  return kExitOk;
}

// ------------------------------------------------------------------ detect

struct DetectArgs {
  std::string input;
  std::string series;
  std::string kind = "binary";
  std::string metric;
  std::string pitch_type = "FF";
  std::vector<std::string> entities;
  std::size_t min_count = 100;
  std::string schema;
  std::string descriptions;
  std::string start_date;
  std::string end_date;
  std::size_t window = 50;
  std::size_t jobs = 1;
  std::string out = "out";
};

std::vector<MetricSeries> load_generic_series(const std::string& path, SeriesKind kind,
                                              const std::string& label) {
  require_readable(path);
  std::ifstream in(path);
  csv::Reader reader(in);
  auto ecol = reader.column("entity_id");
  auto vcol = reader.column("value");
  auto tcol = reader.column("timestamp");
  if (!ecol || !vcol) throw Error(Errc::missing_column, path + ": need entity_id,value");
  std::map<std::string, std::pair<std::vector<double>, std::vector<std::string>>> streams;
  while (auto rec = reader.next()) {
    const auto& f = rec->fields;
    if (f.size() != reader.header().size())
      throw Error(Errc::parse_error, path + " line " + std::to_string(rec->line) +
                                         ": wrong field count");
    auto& s = streams[f[*ecol]];
    try {
      s.first.push_back(std::stod(f[*vcol]));
    } catch (const std::exception&) {
      throw Error(Errc::parse_error, path + " line " + std::to_string(rec->line) +
                                         ": value is not a number");
    }
    if (tcol) s.second.push_back(f[*tcol]);
  }
  std::vector<MetricSeries> out;
  for (auto& [id, s] : streams) {
    std::vector<std::int64_t> index(s.first.size());
    for (std::size_t i = 0; i < index.size(); ++i) index[i] = static_cast<std::int64_t>(i + 1);
    out.emplace_back(std::move(s.first), std::move(index), kind, id, label, std::move(s.second));
  }
  return out;
}

std::string rolling_csv(const CohortResult& cohort, const std::vector<MetricSeries>& players,
                        std::size_t window) {
  std::string text = "entity_id,metric,index,rolling_mean,changepoint\n";
  for (const auto& s : players) {
    if (s.size() < window) continue;
    const auto& result = cohort.results.at(s.entity_id());
    auto means = rolling_mean(s, window);
    for (std::size_t k = 0; k < means.size(); ++k) {
      auto index = s.original_index()[k + window - 1];
      bool marker = std::any_of(result.changepoints.begin(), result.changepoints.end(),
                                [&](const auto& cp) { return cp.t_original == index; });
      text += csv::escape(s.entity_id()) + ',' + csv::escape(s.label()) + ',' +
              std::to_string(index) + ',' + csv::format_number(means[k]) + ',' +
              (marker ? "1" : "0") + '\n';
    }
  }
  return text;
}

int cmd_detect(const DetectArgs& a, const ConfigFlags& flags, std::ostream& out) {
  RunManifest manifest;
  manifest.command = "detect";
  manifest.output_dir = a.out;

  if (a.input.empty() == a.series.empty())
    throw Error(Errc::invalid_argument, "give exactly one of --input or --series");
  if (a.window < 1) throw Error(Errc::invalid_argument, "--window must be at least 1");
  if (a.jobs < 1) throw Error(Errc::invalid_argument, "--jobs must be at least 1");

  SeriesKind kind = SeriesKind::binary;
  std::optional<ingest::Metric> metric;
  if (!a.input.empty()) {
    if (a.metric.empty()) throw Error(Errc::invalid_argument, "--metric is required with --input");
    metric = ingest::parse_metric(a.metric);
    kind = *metric == ingest::Metric::velocity ? SeriesKind::continuous : SeriesKind::binary;
  } else {
    if (a.kind != "binary" && a.kind != "continuous")
      throw Error(Errc::invalid_argument, "--kind must be binary or continuous");
    kind = a.kind == "binary" ? SeriesKind::binary : SeriesKind::continuous;
  }

  DetectionConfig cfg = flags.resolve(manifest);
  validate(cfg, kind);
  manifest.parameters = ordered_json::parse(report::config_to_json(cfg));
  manifest.parameters["window"] = a.window;
  manifest.parameters["jobs"] = a.jobs;

  ingest::LoadOptions load_options;
  if (!a.start_date.empty()) load_options.start_date = ingest::parse_date(a.start_date);
  if (!a.end_date.empty()) load_options.end_date = ingest::parse_date(a.end_date);

  std::vector<MetricSeries> players;
  if (metric) {
    ingest::SchemaMap schema;
    if (!a.schema.empty()) {
      schema = ingest::schema_from_json(read_file(a.schema));
      manifest.inputs.push_back(a.schema);
    }
    if (!a.descriptions.empty()) {
      load_options.descriptions = ingest::load_description_map(a.descriptions);
      manifest.inputs.push_back(a.descriptions);
    }
    require_readable(a.input);
    auto loaded = ingest::load_pitch_csv(a.input, schema, load_options);
    manifest.inputs.push_back(a.input);
    manifest.parameters["skipped_rows"] = loaded.skipped_rows;
    for (const auto& d : loaded.diagnostics) out << "skipped " << d << '\n';
    if (a.entities.empty()) {
      players = ingest::derive_cohort(loaded.events, *metric, a.min_count, a.pitch_type);
    } else {
      for (const auto& id : a.entities) {
        switch (*metric) {
          case ingest::Metric::chase:
            players.push_back(ingest::derive_chase_series(loaded.events, id));
            break;
          case ingest::Metric::whiff:
            players.push_back(ingest::derive_whiff_series(loaded.events, id));
            break;
          case ingest::Metric::velocity:
            players.push_back(ingest::derive_velocity_series(loaded.events, id, a.pitch_type));
            break;
        }
      }
    }
  } else {
    players = load_generic_series(a.series, kind, a.metric.empty() ? "value" : a.metric);
    manifest.inputs.push_back(a.series);
    if (!a.entities.empty()) {
      std::erase_if(players, [&](const MetricSeries& s) {
        return std::find(a.entities.begin(), a.entities.end(), s.entity_id()) == a.entities.end();
      });
    }
  }

  auto cohort = detect_cohort(players, cfg, a.jobs);

  auto doc = ordered_json::parse(report::cohort_to_json(cohort));
  ordered_json wrapped;
  wrapped["manifest"] = kManifestName;
  for (auto& [key, value] : doc.items()) wrapped[key] = value;

  std::string flat = report::detections_csv_header() + "\n";
  for (const auto& [id, r] : cohort.results)
    for (const auto& row : report::to_csv_rows(r)) flat += row + "\n";

  prepare_output_dir(a.out);
  manifest.emit("detections.json", wrapped.dump(2) + "\n");
  manifest.emit("detections.csv", flat);
  manifest.emit("rolling_mean.csv", rolling_csv(cohort, players, a.window));
  manifest.write();

  out << "players: " << cohort.players << ", flagged: " << cohort.flagged_players
      << ", changepoints: " << cohort.total_changepoints << '\n';
  return kExitOk;
}

// ---------------------------------------------------------------- simulate

struct SimulateArgs {
  std::string grid;
  std::size_t reps = 500;
  std::size_t jobs = 1;
  std::string out = "out";
};

int cmd_simulate(const SimulateArgs& a, const ConfigFlags& flags, std::ostream& out) {
  RunManifest manifest;
  manifest.command = "simulate";
  manifest.output_dir = a.out;
  if (a.reps < 1) throw Error(Errc::invalid_argument, "--reps must be at least 1");
  if (a.jobs < 1) throw Error(Errc::invalid_argument, "--jobs must be at least 1");
  DetectionConfig base = flags.resolve(manifest);
  validate(base, SeriesKind::binary);

  auto grid = ordered_json::parse(read_file(a.grid), nullptr, false);
  if (grid.is_discarded() || !grid.is_object() || !grid.contains("specs") ||
      !grid["specs"].is_array())
    throw Error(Errc::parse_error, a.grid + ": expected an object with a \"specs\" array");
  manifest.inputs.push_back(a.grid);
  if (grid.contains("config")) base = report::config_from_json(grid["config"].dump(), base);
  manifest.parameters = ordered_json::parse(report::config_to_json(base));
  manifest.parameters["reps"] = a.reps;
  manifest.parameters["jobs"] = a.jobs;

  struct Entry {
    std::string name;
    PlantedSpec spec;
    DetectionConfig config;
  };
  std::vector<Entry> entries;
  std::size_t i = 0;
  for (const auto& s : grid["specs"]) {
    Entry e;
    e.name = s.value("name", "spec" + std::to_string(i));
    ordered_json spec_only = s;
    spec_only.erase("name");
    spec_only.erase("config");
    e.spec = report::spec_from_json(spec_only.dump());
    e.config = s.contains("config") ? report::config_from_json(s["config"].dump(), base) : base;
    validate(e.config, e.spec.kind == ProfileKind::bernoulli ? SeriesKind::binary
                                                            : SeriesKind::continuous);
    entries.push_back(std::move(e));
    ++i;
  }

  std::string text = report::rate_csv_header() + "\n";
  for (std::size_t k = 0; k < entries.size(); ++k) {
    const auto& e = entries[k];
    auto est = estimate_rates(e.spec, e.config, a.reps, derive_seed(base.seed, k), a.jobs);
    text += report::to_csv_row(e.name, e.spec, e.config, est) + "\n";
    out << e.name << ": flag_rate = " << est.flag_rate << " (" << est.flagged << "/" << est.reps
        << ")\n";
  }
  prepare_output_dir(a.out);
  manifest.emit("simulate.csv", text);
  manifest.write();
  return kExitOk;
}

// ------------------------------------------------------------- groundtruth

struct GroundTruthArgs {
  std::string input;
  std::string roster;
  std::string ladder = "0.5,1,2,5";
  std::string schema;
  std::string out = "out";
};

std::vector<double> parse_ladder(const std::string& text) {
  std::vector<double> ladder;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      double v = std::stod(item, &used);
      if (used != item.size()) throw std::invalid_argument(item);
      ladder.push_back(v);
    } catch (const std::exception&) {
      throw Error(Errc::invalid_argument, "bad ladder value '" + item + "'");
    }
  }
  if (ladder.empty()) throw Error(Errc::invalid_argument, "--ladder is empty");
  for (double v : ladder)
    if (!(v >= 0.0)) throw Error(Errc::invalid_argument, "ladder deltas must be nonnegative");
  return ladder;
}

int cmd_groundtruth(const GroundTruthArgs& a, const ConfigFlags& flags, std::ostream& out) {
  RunManifest manifest;
  manifest.command = "groundtruth";
  manifest.output_dir = a.out;
  auto ladder = parse_ladder(a.ladder);
  DetectionConfig cfg = flags.resolve(manifest);
  validate(cfg, SeriesKind::continuous);
  manifest.parameters = ordered_json::parse(report::config_to_json(cfg));
  manifest.parameters["ladder"] = ladder;

  ingest::SchemaMap schema;
  if (!a.schema.empty()) {
    schema = ingest::schema_from_json(read_file(a.schema));
    manifest.inputs.push_back(a.schema);
  }
  require_readable(a.roster);
  auto roster = ingest::load_roster_csv(a.roster);
  require_readable(a.input);
  auto loaded = ingest::load_pitch_csv(a.input, schema);
  manifest.inputs.push_back(a.input);
  manifest.inputs.push_back(a.roster);

  auto rows = ingest::evaluate_ground_truth(loaded.events, roster, cfg, ladder);
  std::size_t flagged = 0;
  for (const auto& r : rows) {
    if (r.flagged) ++flagged;
    if (!r.monotone) out << "warning: non-monotone flags across the ladder for " << r.pitcher_id << '\n';
  }
  prepare_output_dir(a.out);
  manifest.emit("groundtruth.csv", ingest::ground_truth_csv(rows));
  manifest.write();
  out << "flagged " << flagged << "/" << rows.size() << '\n';
  return kExitOk;
}

}  // namespace

int run(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Split-sample changepoint detection and stabilization for performance metrics",
               "splitcp"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  StabilizeArgs stab;
  auto* s = app.add_subcommand("stabilize", "Stabilization table and Hoeffding confidence sequences");
  s->add_option("--cohort", stab.cohort, "CSV: player,[metric,]successes,trials")->required();
  s->add_option("--events", stab.events, "CSV: entity_id,[metric,]value in time order");
  s->add_option("--metric", stab.metric, "Metric name when the CSV has no metric column");
  s->add_option("--alpha", stab.alpha, "Interval level");
  s->add_option("--lower", stab.lower, "Lower bound of the metric");
  s->add_option("--upper", stab.upper, "Upper bound of the metric");
  s->add_flag("--union-bound", stab.union_bound, "Simultaneous coverage over all t");
  s->add_option("--min-trials", stab.min_trials, "Drop players with fewer trials");
  s->add_option("--out", stab.out, "Output directory");

  DetectArgs det;
  ConfigFlags det_flags;
  auto* d = app.add_subcommand("detect", "Detect changepoints per entity");
  d->add_option("--input", det.input, "Pitch-level CSV");
  d->add_option("--series", det.series, "CSV: entity_id,value[,timestamp]");
  d->add_option("--kind", det.kind, "binary | continuous (with --series)");
  d->add_option("--metric", det.metric, "chase | whiff | velocity (with --input)");
  d->add_option("--pitch-type", det.pitch_type, "Pitch type for velocity");
  d->add_option("--entity", det.entities, "Restrict to these entity ids");
  d->add_option("--min-count", det.min_count, "Qualifying observations per entity");
  d->add_option("--schema", det.schema, "JSON column mapping");
  d->add_option("--descriptions", det.descriptions, "CSV description,swung,contact");
  d->add_option("--start-date", det.start_date, "Inclusive YYYY-MM-DD");
  d->add_option("--end-date", det.end_date, "Inclusive YYYY-MM-DD");
  d->add_option("--window", det.window, "Rolling-mean window");
  d->add_option("--jobs", det.jobs, "Worker threads");
  d->add_option("--out", det.out, "Output directory");
  det_flags.add_to(*d);

  SimulateArgs sim;
  ConfigFlags sim_flags;
  auto* m = app.add_subcommand("simulate", "Monte Carlo flag rates over a grid of planted specs");
  m->add_option("--grid", sim.grid, "Grid JSON")->required();
  m->add_option("--reps", sim.reps, "Replications per spec");
  m->add_option("--jobs", sim.jobs, "Worker threads");
  m->add_option("--out", sim.out, "Output directory");
  sim_flags.add_to(*m);

  GroundTruthArgs gt;
  ConfigFlags gt_flags;
  auto* g = app.add_subcommand("groundtruth", "Evaluate a roster of known role changes");
  g->add_option("--input", gt.input, "Pitch-level CSV")->required();
  g->add_option("--roster", gt.roster, "CSV: pitcher,primary_fastball")->required();
  g->add_option("--ladder", gt.ladder, "Comma-separated shift values");
  g->add_option("--schema", gt.schema, "JSON column mapping");
  g->add_option("--out", gt.out, "Output directory");
  gt_flags.add_to(*g);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitValidation;
  }

  try {
    if (*s) return cmd_stabilize(stab, out);
    if (*d) return cmd_detect(det, det_flags, out);
    if (*m) return cmd_simulate(sim, sim_flags, out);
    if (*g) return cmd_groundtruth(gt, gt_flags, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return e.code() == Errc::io_error ? kExitIo : kExitValidation;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kExitIo;
  }
  return kExitValidation;
}

}  // namespace splitcp::cli
