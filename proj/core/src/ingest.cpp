#include "splitcp/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <tuple>

#include <json.hpp>

#include "splitcp/csv.hpp"
#include "splitcp/error.hpp"
#include "splitcp/seeding.hpp"

namespace splitcp::ingest {

namespace {

template <typename T>
std::optional<T> parse_number(std::string_view text) {
  while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
  while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
  if (text.empty()) return std::nullopt;
  T value{};
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size())
    throw Error(Errc::parse_error, "not a number: '" + std::string(text) + "'");
  return value;
}

bool is_missing(std::string_view text) {
  return text.empty() || text == "NA" || text == "NaN" || text == "null";
}

}  // namespace

Date parse_date(std::string_view text) {
  if (text.size() != 10 || text[4] != '-' || text[7] != '-')
    throw Error(Errc::parse_error, "bad date '" + std::string(text) + "', expected YYYY-MM-DD");
  auto y = parse_number<int>(text.substr(0, 4));
  auto m = parse_number<unsigned>(text.substr(5, 2));
  auto d = parse_number<unsigned>(text.substr(8, 2));
  Date date{std::chrono::year{*y}, std::chrono::month{*m}, std::chrono::day{*d}};
  if (!date.ok()) throw Error(Errc::parse_error, "invalid date '" + std::string(text) + "'");
  return date;
}

std::string format_date(Date date) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(date.year()),
                static_cast<unsigned>(date.month()), static_cast<unsigned>(date.day()));
  return buf;
}

SchemaMap schema_from_json(std::string_view json_text) {
  SchemaMap schema;
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::parse_error, std::string("schema map: ") + e.what());
  }
  if (!j.is_object()) throw Error(Errc::parse_error, "schema map must be a JSON object");
  const std::map<std::string, std::string*> fields = {
      {"game_date", &schema.game_date},       {"pitcher", &schema.pitcher},
      {"batter", &schema.batter},             {"pitch_type", &schema.pitch_type},
      {"release_speed", &schema.release_speed}, {"zone", &schema.zone},
      {"description", &schema.description},   {"inning", &schema.inning},
      {"game_pk", &schema.game_pk},           {"game_year", &schema.game_year},
      {"at_bat_number", &schema.at_bat_number}, {"pitch_number", &schema.pitch_number},
      {"inning_entered", &schema.inning_entered}, {"outing_innings", &schema.outing_innings},
  };
  for (const auto& [key, value] : j.items()) {
    auto it = fields.find(key);
    if (it == fields.end()) throw Error(Errc::parse_error, "schema map: unknown field '" + key + "'");
    if (!value.is_string()) throw Error(Errc::parse_error, "schema map: '" + key + "' must be a string");
    *it->second = value.get<std::string>();
  }
  return schema;
}

DescriptionMap default_description_map() {
  DescriptionMap m;
  for (const char* d : {"ball", "blocked_ball", "called_strike", "hit_by_pitch", "pitchout",
                        "automatic_ball", "automatic_strike", "intent_ball"})
    m.emplace(d, SwingSemantics{false, false});
  for (const char* d : {"foul", "foul_tip", "foul_bunt", "bunt_foul_tip", "foul_pitchout",
                        "hit_into_play", "hit_into_play_no_out", "hit_into_play_score"})
    m.emplace(d, SwingSemantics{true, true});
  for (const char* d :
       {"swinging_strike", "swinging_strike_blocked", "missed_bunt", "swinging_pitchout"})
    m.emplace(d, SwingSemantics{true, false});
  return m;
}

DescriptionMap load_description_map(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::io_error, "cannot open " + path.string());
  csv::Reader reader(in);
  auto dcol = reader.column("description");
  auto scol = reader.column("swung");
  auto ccol = reader.column("contact");
  if (!dcol || !scol || !ccol)
    throw Error(Errc::missing_column, path.string() + ": need description,swung,contact");
  DescriptionMap m;
  while (auto rec = reader.next()) {
    const auto& f = rec->fields;
    if (f.size() != reader.header().size())
      throw Error(Errc::parse_error, path.string() + " line " + std::to_string(rec->line) +
                                         ": wrong field count");
    m[f[*dcol]] = SwingSemantics{f[*scol] == "1", f[*ccol] == "1"};
  }
  return m;
}

LoadResult load_pitch_csv(const std::filesystem::path& path, const SchemaMap& schema,
                          const LoadOptions& options) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::io_error, "cannot open " + path.string());
  csv::Reader reader(in);

  auto require = [&](const std::string& name) {
    auto col = reader.column(name);
    if (!col) throw Error(Errc::missing_column, path.string() + ": missing column '" + name + "'");
    return *col;
  };
  const std::size_t c_date = require(schema.game_date);
  const std::size_t c_pitcher = require(schema.pitcher);
  const std::size_t c_batter = require(schema.batter);
  const std::size_t c_type = require(schema.pitch_type);
  const std::size_t c_speed = require(schema.release_speed);
  const std::size_t c_zone = require(schema.zone);
  const std::size_t c_desc = require(schema.description);
  const auto c_inning = reader.column(schema.inning);
  const auto c_game = reader.column(schema.game_pk);
  const auto c_year = reader.column(schema.game_year);
  const auto c_ab = reader.column(schema.at_bat_number);
  const auto c_pitch = reader.column(schema.pitch_number);
  const auto c_entered = reader.column(schema.inning_entered);
  const auto c_outing = reader.column(schema.outing_innings);

  LoadResult result;
  std::vector<bool> has_outing;
  while (auto rec = reader.next()) {
    const auto& f = rec->fields;
    try {
      if (f.size() != reader.header().size())
        throw Error(Errc::parse_error, "expected " + std::to_string(reader.header().size()) +
                                           " fields, found " + std::to_string(f.size()));
      PitchEvent ev;
      ev.game_date = parse_date(f[c_date]);
      if (options.start_date && ev.game_date < *options.start_date) continue;
      if (options.end_date && ev.game_date > *options.end_date) continue;
      ev.pitcher_id = f[c_pitcher];
      ev.batter_id = f[c_batter];
      ev.pitch_type = f[c_type];
      if (!is_missing(f[c_speed])) {
        ev.release_speed = parse_number<double>(f[c_speed]);
        if (!(*ev.release_speed > 0.0)) throw Error(Errc::parse_error, "release_speed must be positive");
      }
      if (!is_missing(f[c_zone])) {
        int zone = *parse_number<int>(f[c_zone]);
        ev.in_zone = zone >= 1 && zone <= 9;
      }
      auto sem = options.descriptions.find(f[c_desc]);
      if (sem == options.descriptions.end())
        throw Error(Errc::parse_error, "unknown description '" + f[c_desc] + "'");
      ev.swung = sem->second.swung;
      if (ev.swung) ev.made_contact = sem->second.contact;
      if (c_inning && !is_missing(f[*c_inning])) ev.inning = parse_number<int>(f[*c_inning]);
      ev.game_id = c_game && !is_missing(f[*c_game]) ? f[*c_game] : f[c_date];
      ev.season = c_year && !is_missing(f[*c_year]) ? *parse_number<int>(f[*c_year])
                                                    : static_cast<int>(ev.game_date.year());
      if (c_ab && !is_missing(f[*c_ab])) ev.at_bat_number = *parse_number<std::int64_t>(f[*c_ab]);
      if (c_pitch && !is_missing(f[*c_pitch]))
        ev.pitch_number = *parse_number<std::int64_t>(f[*c_pitch]);
      bool outing_given = false;
      if (c_entered && c_outing && !is_missing(f[*c_entered]) && !is_missing(f[*c_outing])) {
        ev.inning_entered = *parse_number<int>(f[*c_entered]);
        ev.outing_innings = *parse_number<double>(f[*c_outing]);
        outing_given = true;
      }
      result.events.push_back(std::move(ev));
      has_outing.push_back(outing_given);
    } catch (const Error& e) {
      ++result.skipped_rows;
      result.diagnostics.push_back("line " + std::to_string(rec->line) + ": " + e.what());
    }
  }

  // Fill outing fields that were not supplied.
  std::map<std::pair<std::string, std::string>, std::pair<int, std::set<int>>> outings;
  for (std::size_t i = 0; i < result.events.size(); ++i) {
    const auto& ev = result.events[i];
    if (has_outing[i] || !ev.inning) continue;
    auto& slot = outings[{ev.pitcher_id, ev.game_id}];
    if (slot.second.empty() || *ev.inning < slot.first) slot.first = *ev.inning;
    slot.second.insert(*ev.inning);
  }
  for (std::size_t i = 0; i < result.events.size(); ++i) {
    auto& ev = result.events[i];
    if (has_outing[i] || !ev.inning) continue;
    const auto& slot = outings[{ev.pitcher_id, ev.game_id}];
    ev.inning_entered = slot.first;
    ev.outing_innings = static_cast<double>(slot.second.size());
  }

  std::stable_sort(result.events.begin(), result.events.end(), [](const auto& a, const auto& b) {
    return std::tie(a.game_date, a.game_id, a.at_bat_number, a.pitch_number) <
           std::tie(b.game_date, b.game_id, b.at_bat_number, b.pitch_number);
  });
  return result;
}

void write_pitch_csv(std::span<const PitchEvent> events, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(Errc::io_error, "cannot write " + path.string());
  out << "game_date,game_pk,game_year,pitcher,batter,pitch_type,release_speed,zone,"
         "description,inning,at_bat_number,pitch_number,inning_entered,outing_innings\n";
  for (const auto& ev : events) {
    std::string desc;
    if (!ev.swung) desc = ev.in_zone.value_or(false) ? "called_strike" : "ball";
    else desc = ev.made_contact.value_or(true) ? "foul" : "swinging_strike";
    std::string zone = !ev.in_zone ? "" : (*ev.in_zone ? "5" : "13");
    out << format_date(ev.game_date) << ',' << csv::escape(ev.game_id) << ',' << ev.season << ','
        << csv::escape(ev.pitcher_id) << ',' << csv::escape(ev.batter_id) << ','
        << csv::escape(ev.pitch_type) << ','
        << (ev.release_speed ? csv::format_number(*ev.release_speed) : "") << ',' << zone << ','
        << desc << ',' << (ev.inning ? std::to_string(*ev.inning) : "") << ','
        << ev.at_bat_number << ',' << ev.pitch_number << ',' << ev.inning_entered << ','
        << csv::format_number(ev.outing_innings) << '\n';
  }
  if (!out) throw Error(Errc::io_error, "write failed for " + path.string());
}

std::string_view to_string(Metric metric) noexcept {
  switch (metric) {
    case Metric::chase: return "chase";
    case Metric::whiff: return "whiff";
    case Metric::velocity: return "velocity";
  }
  return "chase";
}

Metric parse_metric(std::string_view text) {
  if (text == "chase") return Metric::chase;
  if (text == "whiff") return Metric::whiff;
  if (text == "velocity" || text == "ff_velo") return Metric::velocity;
  throw Error(Errc::invalid_argument, "unknown metric '" + std::string(text) + "'");
}

namespace {

template <typename Keep, typename Value>
MetricSeries derive(std::span<const PitchEvent> events, std::string_view entity,
                    std::string label, SeriesKind kind, Keep keep, Value value) {
  std::vector<double> values;
  std::vector<std::string> dates;
  for (const auto& ev : events) {
    if (!keep(ev)) continue;
    values.push_back(value(ev));
    dates.push_back(format_date(ev.game_date));
  }
  if (values.empty())
    throw Error(Errc::empty_series, "no qualifying observations for '" + std::string(entity) +
                                        "' (" + label + ")");
  std::vector<std::int64_t> index(values.size());
  for (std::size_t i = 0; i < index.size(); ++i) index[i] = static_cast<std::int64_t>(i + 1);
  return MetricSeries(std::move(values), std::move(index), kind, std::string(entity),
                      std::move(label), std::move(dates));
}

}  // namespace

MetricSeries derive_chase_series(std::span<const PitchEvent> events, std::string_view batter_id) {
  return derive(
      events, batter_id, "chase", SeriesKind::binary,
      [&](const PitchEvent& e) { return e.batter_id == batter_id && e.in_zone == false; },
      [](const PitchEvent& e) { return e.swung ? 1.0 : 0.0; });
}

MetricSeries derive_whiff_series(std::span<const PitchEvent> events, std::string_view batter_id) {
  return derive(
      events, batter_id, "whiff", SeriesKind::binary,
      [&](const PitchEvent& e) { return e.batter_id == batter_id && e.swung; },
      [](const PitchEvent& e) { return e.made_contact.value_or(true) ? 0.0 : 1.0; });
}

MetricSeries derive_velocity_series(std::span<const PitchEvent> events,
                                    std::string_view pitcher_id, std::string_view pitch_type) {
  return derive(
      events, pitcher_id, "velocity_" + std::string(pitch_type), SeriesKind::continuous,
      [&](const PitchEvent& e) {
        return e.pitcher_id == pitcher_id && e.pitch_type == pitch_type && e.release_speed;
      },
      [](const PitchEvent& e) { return *e.release_speed; });
}

std::vector<MetricSeries> derive_cohort(std::span<const PitchEvent> events, Metric metric,
                                        std::size_t min_count, std::string_view pitch_type) {
  std::map<std::string, std::size_t> counts;
  for (const auto& e : events) {
    switch (metric) {
      case Metric::chase:
        if (e.in_zone == false) ++counts[e.batter_id];
        break;
      case Metric::whiff:
        if (e.swung) ++counts[e.batter_id];
        break;
      case Metric::velocity:
        if (e.pitch_type == pitch_type && e.release_speed) ++counts[e.pitcher_id];
        break;
    }
  }
  std::vector<MetricSeries> out;
  for (const auto& [id, n] : counts) {
    if (n < min_count) continue;
    switch (metric) {
      case Metric::chase: out.push_back(derive_chase_series(events, id)); break;
      case Metric::whiff: out.push_back(derive_whiff_series(events, id)); break;
      case Metric::velocity: out.push_back(derive_velocity_series(events, id, pitch_type)); break;
    }
  }
  return out;
}

std::string_view to_string(Role role) noexcept {
  switch (role) {
    case Role::starter: return "starter";
    case Role::reliever: return "reliever";
    case Role::mixed: return "mixed";
  }
  return "mixed";
}

Role classify_role(std::int64_t long_outings, std::int64_t late_entries) noexcept {
  if (long_outings > 10 && late_entries < 5) return Role::starter;
  if (late_entries > 10 && long_outings <= 10) return Role::reliever;
  return Role::mixed;
}

RoleProfile classify_roles(std::span<const PitchEvent> events, std::string_view pitcher_id,
                           int season) {
  std::map<std::string, std::pair<int, double>> outings;  // game -> (entered, innings)
  for (const auto& e : events) {
    if (e.pitcher_id != pitcher_id || e.season != season) continue;
    outings.emplace(e.game_id, std::make_pair(e.inning_entered, e.outing_innings));
  }
  RoleProfile p;
  p.pitcher_id = std::string(pitcher_id);
  p.season = season;
  p.outings = static_cast<std::int64_t>(outings.size());
  double innings = 0.0;
  for (const auto& [game, o] : outings) {
    if (o.second > 4.0) ++p.long_outings;
    if (o.first >= 5) ++p.late_entries;
    innings += o.second;
  }
  p.avg_innings = outings.empty() ? 0.0 : innings / static_cast<double>(outings.size());
  p.role = classify_role(p.long_outings, p.late_entries);
  return p;
}

std::string_view to_string(FastballType type) noexcept {
  return type == FastballType::sinker ? "sinker" : "four_seam";
}

std::string_view pitch_code(FastballType type) noexcept {
  return type == FastballType::sinker ? "SI" : "FF";
}

FastballType parse_fastball(std::string_view text) {
  if (text == "four_seam" || text == "FF") return FastballType::four_seam;
  if (text == "sinker" || text == "SI") return FastballType::sinker;
  throw Error(Errc::parse_error, "unknown fastball type '" + std::string(text) + "'");
}

GroundTruthRow evaluate_pitcher(const MetricSeries& velocity, FastballType primary,
                                const DetectionConfig& config, std::span<const double> ladder) {
  if (ladder.empty()) throw Error(Errc::invalid_argument, "delta ladder is empty");
  GroundTruthRow row;
  row.pitcher_id = velocity.entity_id();
  row.primary_fastball = primary;
  row.ladder.assign(ladder.begin(), ladder.end());
  std::sort(row.ladder.begin(), row.ladder.end());
  if (row.ladder.front() < 0.0) throw Error(Errc::invalid_argument, "ladder deltas must be nonnegative");

  DetectionConfig local = config;
  local.seed = derive_seed(config.seed, velocity.entity_id());
  bool seen_miss = false;
  for (double delta : row.ladder) {
    local.delta = delta;
    bool hit = !detect_multiple(velocity, local).changepoints.empty();
    row.flagged_at.push_back(hit);
    if (hit && seen_miss) row.monotone = false;
    if (!hit) seen_miss = true;
  }
  row.flagged = row.flagged_at.front();
  if (row.flagged) {
    for (std::size_t i = row.ladder.size(); i-- > 0;) {
      if (row.flagged_at[i]) {
        row.max_cp_threshold = row.ladder[i];
        break;
      }
    }
  }
  return row;
}

std::vector<GroundTruthRow> evaluate_ground_truth(std::span<const PitchEvent> events,
                                                  std::span<const RosterEntry> roster,
                                                  const DetectionConfig& config,
                                                  std::span<const double> delta_ladder) {
  validate(config, SeriesKind::continuous);
  std::vector<GroundTruthRow> rows;
  for (const auto& entry : roster) {
    bool present = std::any_of(events.begin(), events.end(), [&](const PitchEvent& e) {
      return e.pitcher_id == entry.pitcher_id;
    });
    if (!present)
      throw Error(Errc::unknown_entity, "pitcher '" + entry.pitcher_id + "' not in events");
    auto series =
        derive_velocity_series(events, entry.pitcher_id, pitch_code(entry.primary_fastball));
    rows.push_back(evaluate_pitcher(series, entry.primary_fastball, config, delta_ladder));
  }
  return rows;
}

std::vector<RosterEntry> load_roster_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::io_error, "cannot open " + path.string());
  csv::Reader reader(in);
  auto pcol = reader.column("pitcher");
  auto fcol = reader.column("primary_fastball");
  if (!pcol) throw Error(Errc::missing_column, path.string() + ": missing column 'pitcher'");
  if (!fcol) throw Error(Errc::missing_column, path.string() + ": missing column 'primary_fastball'");
  std::vector<RosterEntry> roster;
  while (auto rec = reader.next()) {
    if (rec->fields.size() != reader.header().size())
      throw Error(Errc::parse_error, path.string() + " line " + std::to_string(rec->line) +
                                         ": wrong field count");
    roster.push_back({rec->fields[*pcol], parse_fastball(rec->fields[*fcol])});
  }
  return roster;
}

std::string ground_truth_csv(std::span<const GroundTruthRow> rows) {
  std::ostringstream os;
  os << "pitcher,primary_fastball,flagged,max_cp_threshold,monotone\n";
  for (const auto& r : rows) {
    os << csv::escape(r.pitcher_id) << ',' << to_string(r.primary_fastball) << ','
       << (r.flagged ? "Yes" : "No") << ','
       << (r.max_cp_threshold ? csv::format_number(*r.max_cp_threshold) : "NA") << ','
       << (r.monotone ? "true" : "false") << '\n';
  }
  return os.str();
}

}  // namespace splitcp::ingest
