#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace splitcp {

enum class SeriesKind { binary, continuous };

std::string_view to_string(SeriesKind kind) noexcept;

// Time-ordered observations of one metric for one entity.
//
// Positions are 1-based. `original_index()[k]` is the position of value k in
// the full stream the series was cut from, so halves and sub-segments keep
// reporting locations in the parent's coordinates.
class MetricSeries {
 public:
  // Validates and assigns original indices 1..n.
  static MetricSeries create(std::vector<double> values, SeriesKind kind,
                             std::string entity_id, std::string label);

  // Full constructor used when indices or timestamps come from elsewhere.
  // `timestamps` may be empty (no tags) or match `values` in length.
  MetricSeries(std::vector<double> values, std::vector<std::int64_t> original_index,
               SeriesKind kind, std::string entity_id, std::string label,
               std::vector<std::string> timestamps = {});

  [[nodiscard]] std::size_t size() const noexcept { return values_.size(); }
  [[nodiscard]] std::span<const double> values() const noexcept { return values_; }
  [[nodiscard]] std::span<const std::int64_t> original_index() const noexcept {
    return original_index_;
  }
  [[nodiscard]] SeriesKind kind() const noexcept { return kind_; }
  [[nodiscard]] const std::string& entity_id() const noexcept { return entity_id_; }
  [[nodiscard]] const std::string& label() const noexcept { return label_; }
  [[nodiscard]] bool has_timestamps() const noexcept { return !timestamps_.empty(); }
  [[nodiscard]] std::span<const std::string> timestamps() const noexcept {
    return timestamps_;
  }

  // Timestamp tag at 0-based offset, if tags are present.
  [[nodiscard]] std::optional<std::string> timestamp_at(std::size_t offset) const;

  // 0-based offset of the observation whose original index is `original`.
  [[nodiscard]] std::optional<std::size_t> offset_of(std::int64_t original) const;

  // Sub-series covering 1-based positions [first, last] (inclusive).
  [[nodiscard]] MetricSeries slice(std::size_t first, std::size_t last) const;

  [[nodiscard]] double mean() const;

 private:
  std::vector<double> values_;
  std::vector<std::int64_t> original_index_;
  SeriesKind kind_;
  std::string entity_id_;
  std::string label_;
  std::vector<std::string> timestamps_;
};

struct SplitPair {
  MetricSeries odd;   // positions 1, 3, 5, ...
  MetricSeries even;  // positions 2, 4, 6, ...
};

MetricSeries new_metric_series(std::vector<double> values, SeriesKind kind,
                               std::string entity_id, std::string label);

SplitPair split_odd_even(const MetricSeries& series);

// Trailing-window means; output has size() - window + 1 entries.
std::vector<double> rolling_mean(const MetricSeries& series, std::size_t window);

}  // namespace splitcp
