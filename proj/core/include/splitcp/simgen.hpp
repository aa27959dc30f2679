#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "splitcp/detect.hpp"
#include "splitcp/loglik.hpp"
#include "splitcp/series.hpp"

namespace splitcp {

struct PlantedSegment {
  std::size_t length = 0;
  double p = 0.5;       // bernoulli
  double mu = 0.0;      // gaussian
  double sigma = 1.0;   // gaussian
};

struct PlantedSpec {
  ProfileKind kind = ProfileKind::bernoulli;
  std::vector<PlantedSegment> segments;
  std::uint64_t seed = 0;

  [[nodiscard]] std::size_t n() const noexcept;
  // Original indices of the last observation of every segment but the last.
  [[nodiscard]] std::vector<std::int64_t> planted_changes() const;
};

void validate(const PlantedSpec& spec);

struct RateEstimate {
  double flag_rate = 0.0;
  std::optional<double> localization_mae;
  std::size_t reps = 0;
  std::size_t flagged = 0;
  double mc_stderr = 0.0;
};

// Deterministic in (spec, spec.seed).
MetricSeries generate(const PlantedSpec& spec, std::string entity_id = "sim",
                      std::string label = "sim");

// Runs detect_multiple on `reps` independent draws. Rep r uses
// derive_seed(seed, r) for the data and a further derived seed for the test.
// Localization error per flagged rep is the mean, over planted changes, of the
// distance to the nearest flag.
RateEstimate estimate_rates(const PlantedSpec& spec, const DetectionConfig& config,
                            std::size_t reps, std::uint64_t seed,
                            std::size_t parallelism = 1);

}  // namespace splitcp
