#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "splitcp/detect.hpp"
#include "splitcp/series.hpp"

namespace splitcp::ingest {

using Date = std::chrono::year_month_day;

Date parse_date(std::string_view text);  // YYYY-MM-DD
std::string format_date(Date date);

struct PitchEvent {
  Date game_date{};
  std::string game_id;  // game_pk when available, otherwise the date
  std::string pitcher_id;
  std::string batter_id;
  std::string pitch_type;
  std::optional<double> release_speed;
  std::optional<bool> in_zone;
  bool swung = false;
  std::optional<bool> made_contact;  // set only when swung
  std::optional<int> inning;
  int inning_entered = 0;      // pitcher's first inning in this outing
  double outing_innings = 0.0;  // innings pitched in this outing
  int season = 0;
  std::int64_t at_bat_number = 0;
  std::int64_t pitch_number = 0;
};

// Logical field -> CSV column name. Defaults follow the Statcast export.
struct SchemaMap {
  std::string game_date = "game_date";
  std::string pitcher = "pitcher";
  std::string batter = "batter";
  std::string pitch_type = "pitch_type";
  std::string release_speed = "release_speed";
  std::string zone = "zone";
  std::string description = "description";
  // Optional columns; used when present.
  std::string inning = "inning";
  std::string game_pk = "game_pk";
  std::string game_year = "game_year";
  std::string at_bat_number = "at_bat_number";
  std::string pitch_number = "pitch_number";
  std::string inning_entered = "inning_entered";
  std::string outing_innings = "outing_innings";
};

// Overrides any subset of the defaults from a JSON object such as
// {"pitcher": "pitcher_id", "zone": "plate_zone"}.
SchemaMap schema_from_json(std::string_view json_text);

struct SwingSemantics {
  bool swung = false;
  bool contact = false;
};

// Statcast `description` vocabulary -> swing / contact.
using DescriptionMap = std::map<std::string, SwingSemantics, std::less<>>;

DescriptionMap default_description_map();
// CSV with header description,swung,contact (values 0/1).
DescriptionMap load_description_map(const std::filesystem::path& path);

struct LoadOptions {
  DescriptionMap descriptions = default_description_map();
  std::optional<Date> start_date;  // inclusive
  std::optional<Date> end_date;    // inclusive
};

struct LoadResult {
  std::vector<PitchEvent> events;
  std::size_t skipped_rows = 0;
  std::vector<std::string> diagnostics;  // "line N: reason"
};

// Rows are stably ordered by (game_date, game_pk, at_bat_number,
// pitch_number); file order breaks remaining ties. When the outing columns
// are absent, each (pitcher, game) outing gets inning_entered = first inning
// pitched and outing_innings = number of distinct innings pitched.
LoadResult load_pitch_csv(const std::filesystem::path& path, const SchemaMap& schema = {},
                          const LoadOptions& options = {});

// Writes events in the default schema (plus outing columns). Swing semantics
// are encoded with representative descriptions.
void write_pitch_csv(std::span<const PitchEvent> events, const std::filesystem::path& path);

enum class Metric { chase, whiff, velocity };
std::string_view to_string(Metric metric) noexcept;
Metric parse_metric(std::string_view text);

// Out-of-zone pitches faced by the batter; 1 iff swung.
MetricSeries derive_chase_series(std::span<const PitchEvent> events, std::string_view batter_id);
// Swings by the batter; 1 iff no contact.
MetricSeries derive_whiff_series(std::span<const PitchEvent> events, std::string_view batter_id);
// Release speeds of the pitcher's given pitch type; missing speeds dropped.
MetricSeries derive_velocity_series(std::span<const PitchEvent> events,
                                    std::string_view pitcher_id, std::string_view pitch_type);

// Every entity with at least `min_count` qualifying observations, sorted by id.
std::vector<MetricSeries> derive_cohort(std::span<const PitchEvent> events, Metric metric,
                                        std::size_t min_count, std::string_view pitch_type = "FF");

enum class Role { starter, reliever, mixed };
std::string_view to_string(Role role) noexcept;

struct RoleProfile {
  std::string pitcher_id;
  int season = 0;
  std::int64_t outings = 0;
  std::int64_t long_outings = 0;  // > 4 innings
  std::int64_t late_entries = 0;  // entered in inning >= 5
  Role role = Role::mixed;
  double avg_innings = 0.0;
};

// starter: long > 10 and late < 5; reliever: late > 10 and long <= 10.
Role classify_role(std::int64_t long_outings, std::int64_t late_entries) noexcept;
RoleProfile classify_roles(std::span<const PitchEvent> events, std::string_view pitcher_id,
                           int season);

enum class FastballType { four_seam, sinker };
std::string_view to_string(FastballType type) noexcept;
std::string_view pitch_code(FastballType type) noexcept;  // FF / SI
FastballType parse_fastball(std::string_view text);

struct RosterEntry {
  std::string pitcher_id;
  FastballType primary_fastball = FastballType::four_seam;
};

struct GroundTruthRow {
  std::string pitcher_id;
  FastballType primary_fastball = FastballType::four_seam;
  bool flagged = false;
  std::optional<double> max_cp_threshold;
  std::vector<double> ladder;          // ascending
  std::vector<bool> flagged_at;        // parallel to ladder
  bool monotone = true;                // no flag after a non-flag
};

// For each roster pitcher, runs detect_multiple on the primary fastball
// velocity series at every delta on the ladder, reusing one seed per pitcher.
GroundTruthRow evaluate_pitcher(const MetricSeries& velocity, FastballType primary,
                                const DetectionConfig& config, std::span<const double> ladder);
std::vector<GroundTruthRow> evaluate_ground_truth(std::span<const PitchEvent> events,
                                                  std::span<const RosterEntry> roster,
                                                  const DetectionConfig& config,
                                                  std::span<const double> delta_ladder);

std::vector<RosterEntry> load_roster_csv(const std::filesystem::path& path);

// pitcher,primary_fastball,flagged,max_cp_threshold,monotone
std::string ground_truth_csv(std::span<const GroundTruthRow> rows);

}  // namespace splitcp::ingest
