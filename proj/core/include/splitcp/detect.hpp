#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "splitcp/hypotests.hpp"
#include "splitcp/series.hpp"

namespace splitcp {

enum class TestChoice { fisher_exact, permutation_shift, automatic };
enum class Correction { none, bonferroni };

std::string_view to_string(TestChoice choice) noexcept;
std::string_view to_string(Correction correction) noexcept;
TestChoice parse_test_choice(std::string_view text);
Correction parse_correction(std::string_view text);

struct DetectionConfig {
  double alpha = 0.05;
  double delta = 0.0;
  TestChoice test = TestChoice::automatic;
  std::size_t min_segment = 50;
  // Unset means 1 for binary series and 2 for continuous ones.
  std::optional<std::size_t> min_side;
  std::int64_t n_perm = 2000;
  std::uint64_t seed = 0;
  bool use_split = true;
  Correction correction = Correction::none;
  std::int64_t exact_limit = 20000;
};

// Throws invalid_argument / alpha_out_of_range / config_conflict.
void validate(const DetectionConfig& config, SeriesKind kind);

// automatic -> Fisher for binary data with delta == 0, permutation otherwise.
TestMethod resolve_test(const DetectionConfig& config, SeriesKind kind);
std::size_t resolve_min_side(const DetectionConfig& config, SeriesKind kind);

struct FlaggedChangepoint {
  std::int64_t t_original = 0;  // last observation before the change
  double p_value = 1.0;
  double mean_before = 0.0;
  double mean_after = 0.0;
  double candidate_lambda = 0.0;
  std::optional<std::string> timestamp;
};

enum class Decision { flagged, not_significant, untestable, segment_too_short };

std::string_view to_string(Decision decision) noexcept;

struct AuditEntry {
  std::int64_t segment_start = 0;  // original indices, inclusive
  std::int64_t segment_end = 0;
  std::optional<std::int64_t> candidate;
  double candidate_lambda = 0.0;
  std::optional<double> p_value;
  double alpha_used = 0.0;
  std::size_t test_before_n = 0;
  std::size_t test_after_n = 0;
  Decision decision = Decision::not_significant;
  std::string note;
};

struct DetectionResult {
  std::string entity_id;
  std::string metric;
  std::vector<FlaggedChangepoint> changepoints;  // sorted by t_original
  std::vector<AuditEntry> audit;                 // in processing order
  DetectionConfig config;                        // as applied, seed included
  TestMethod method = TestMethod::fisher_exact;
};

// Split-sample single changepoint: candidate from the odd positions, test on
// the even positions. With use_split = false both steps use all data.
DetectionResult detect_single(const MetricSeries& series, const DetectionConfig& config);

// Binary segmentation over detect_single with minimum segment length m.
DetectionResult detect_multiple(const MetricSeries& series, const DetectionConfig& config);

struct CohortResult {
  std::map<std::string, DetectionResult> results;
  std::size_t players = 0;
  std::size_t flagged_players = 0;
  std::size_t total_changepoints = 0;
};

// Runs detect_multiple per entity with seed derive_seed(config.seed,
// entity_id). Output does not depend on `parallelism`.
CohortResult detect_cohort(std::span<const MetricSeries> players,
                           const DetectionConfig& config, std::size_t parallelism = 1);

}  // namespace splitcp
