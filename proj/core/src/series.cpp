#include "splitcp/series.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "splitcp/error.hpp"

namespace splitcp {

std::string_view to_string(SeriesKind kind) noexcept {
  return kind == SeriesKind::binary ? "binary" : "continuous";
}

MetricSeries MetricSeries::create(std::vector<double> values, SeriesKind kind,
                                  std::string entity_id, std::string label) {
  std::vector<std::int64_t> index(values.size());
  std::iota(index.begin(), index.end(), std::int64_t{1});
  return MetricSeries(std::move(values), std::move(index), kind, std::move(entity_id),
                      std::move(label));
}

MetricSeries::MetricSeries(std::vector<double> values,
                           std::vector<std::int64_t> original_index, SeriesKind kind,
                           std::string entity_id, std::string label,
                           std::vector<std::string> timestamps)
    : values_(std::move(values)),
      original_index_(std::move(original_index)),
      kind_(kind),
      entity_id_(std::move(entity_id)),
      label_(std::move(label)),
      timestamps_(std::move(timestamps)) {
  if (values_.empty()) throw Error(Errc::empty_input, "series has no values");
  if (original_index_.size() != values_.size())
    throw Error(Errc::invalid_argument, "original_index length differs from values");
  if (!timestamps_.empty() && timestamps_.size() != values_.size())
    throw Error(Errc::invalid_argument, "timestamps length differs from values");
  if (original_index_.front() < 1)
    throw Error(Errc::invalid_argument, "original_index must be positive");
  for (std::size_t k = 1; k < original_index_.size(); ++k) {
    if (original_index_[k] <= original_index_[k - 1])
      throw Error(Errc::invalid_argument, "original_index must be strictly increasing");
  }
  for (double v : values_) {
    if (!std::isfinite(v)) throw Error(Errc::invalid_argument, "non-finite value");
    if (kind_ == SeriesKind::binary && v != 0.0 && v != 1.0)
      throw Error(Errc::non_binary_value,
                  "value " + std::to_string(v) + " in binary series");
  }
}

std::optional<std::string> MetricSeries::timestamp_at(std::size_t offset) const {
  if (timestamps_.empty() || offset >= timestamps_.size()) return std::nullopt;
  return timestamps_[offset];
}

std::optional<std::size_t> MetricSeries::offset_of(std::int64_t original) const {
  auto it = std::lower_bound(original_index_.begin(), original_index_.end(), original);
  if (it == original_index_.end() || *it != original) return std::nullopt;
  return static_cast<std::size_t>(it - original_index_.begin());
}

MetricSeries MetricSeries::slice(std::size_t first, std::size_t last) const {
  if (first < 1 || last < first || last > size())
    throw Error(Errc::invalid_argument, "slice bounds outside series");
  auto b = static_cast<std::ptrdiff_t>(first - 1);
  auto e = static_cast<std::ptrdiff_t>(last);
  std::vector<std::string> tags;
  if (!timestamps_.empty()) tags.assign(timestamps_.begin() + b, timestamps_.begin() + e);
  return MetricSeries({values_.begin() + b, values_.begin() + e},
                      {original_index_.begin() + b, original_index_.begin() + e}, kind_,
                      entity_id_, label_, std::move(tags));
}

double MetricSeries::mean() const {
  return std::accumulate(values_.begin(), values_.end(), 0.0) /
         static_cast<double>(values_.size());
}

MetricSeries new_metric_series(std::vector<double> values, SeriesKind kind,
                               std::string entity_id, std::string label) {
  return MetricSeries::create(std::move(values), kind, std::move(entity_id),
                              std::move(label));
}

SplitPair split_odd_even(const MetricSeries& series) {
  if (series.size() < 2) throw Error(Errc::too_short, "need at least 2 values to split");

  auto take = [&](std::size_t start) {
    std::vector<double> values;
    std::vector<std::int64_t> index;
    std::vector<std::string> tags;
    for (std::size_t k = start; k < series.size(); k += 2) {
      values.push_back(series.values()[k]);
      index.push_back(series.original_index()[k]);
      if (series.has_timestamps()) tags.push_back(series.timestamps()[k]);
    }
    return MetricSeries(std::move(values), std::move(index), series.kind(),
                        series.entity_id(), series.label(), std::move(tags));
  };
  // 0-based offset 0 is 1-based position 1.
  return SplitPair{take(0), take(1)};
}

std::vector<double> rolling_mean(const MetricSeries& series, std::size_t window) {
  if (window < 1) throw Error(Errc::invalid_argument, "window must be at least 1");
  if (window > series.size())
    throw Error(Errc::window_too_large, "window " + std::to_string(window) +
                                            " exceeds series length " +
                                            std::to_string(series.size()));
  auto v = series.values();
  std::vector<double> out;
  out.reserve(v.size() - window + 1);
  // Recompute each window rather than sliding a running sum so the output
  // stays inside [min, max] without drift.
  for (std::size_t end = window; end <= v.size(); ++end) {
    double sum = 0.0;
    for (std::size_t k = end - window; k < end; ++k) sum += v[k];
    double m = sum / static_cast<double>(window);
    auto [lo, hi] = std::minmax_element(v.begin() + static_cast<std::ptrdiff_t>(end - window),
                                        v.begin() + static_cast<std::ptrdiff_t>(end));
    out.push_back(std::clamp(m, *lo, *hi));
  }
  return out;
}

}  // namespace splitcp
