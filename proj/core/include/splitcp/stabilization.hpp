#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "splitcp/series.hpp"

namespace splitcp {

// One row of a cohort stabilization table.
struct StabilizationReport {
  std::string metric;
  double p_hat = 0.0;
  double sigma_obs = 0.0;
  double sigma_samp = 0.0;
  double sigma_latent = 0.0;
  std::int64_t n_stable = 0;
  std::int64_t player_count = 0;
};

struct Bounds {
  double lower = 0.0;
  double upper = 1.0;
};

struct ConfidenceInterval {
  double center = 0.0;
  double lower = 0.0;  // clipped to bounds
  double upper = 0.0;  // clipped to bounds
  double half_width = 0.0;  // unclipped
  std::int64_t t = 0;
  double alpha = 0.05;
  Bounds bounds;
};

struct PlayerCounts {
  std::int64_t successes = 0;
  std::int64_t trials = 0;
};

// sqrt(sigma_obs^2 - sigma_samp^2). Differences within 1e-9 relative of zero
// are treated as exactly zero.
double latent_sd(double sigma_obs, double sigma_samp);

// Smallest event count whose Bernoulli RMSE is within sigma_latent:
// ceil(p(1-p) / sigma_latent^2). Returns 1 for p_hat in {0, 1}.
std::int64_t stabilization_point(double p_hat, double sigma_latent);

StabilizationReport cohort_stabilization(std::span<const PlayerCounts> per_player,
                                         std::string metric);

ConfidenceInterval hoeffding_interval(double mean, std::int64_t t, double alpha,
                                      Bounds bounds = {});

struct ConfidenceSequenceOptions {
  double alpha = 0.05;
  Bounds bounds;
  // Spend alpha / (t (t + 1)) at step t so the intervals hold simultaneously
  // over all t instead of pointwise.
  bool union_bound = false;
};

std::vector<ConfidenceInterval> confidence_sequence(const MetricSeries& series,
                                                    const ConfidenceSequenceOptions& options);

// metric,p_hat,sigma_obs,sigma_samp,sigma_latent,n_stable
std::string stabilization_csv_header();
std::string to_csv_row(const StabilizationReport& report);

}  // namespace splitcp
