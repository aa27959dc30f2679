#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "splitcp/series.hpp"

namespace splitcp {

enum class ProfileKind { bernoulli, gaussian };

// Variance floor applied to every Gaussian MLE variance (squared units).
inline constexpr double kGaussianVarianceFloor = 1e-9;

// Inclusive range of split positions t: the left segment is 1..t, the right
// is t+1..T.
struct ScanRange {
  std::size_t t_min = 1;
  std::size_t t_max = 1;
};

// lambda_t for every admissible split, natural-log units.
struct LambdaProfile {
  std::vector<double> lambda;
  ScanRange t_range;
  ProfileKind kind = ProfileKind::bernoulli;

  [[nodiscard]] bool empty() const noexcept { return lambda.empty(); }
  [[nodiscard]] double at(std::size_t t) const { return lambda.at(t - t_range.t_min); }
};

struct CandidateChangepoint {
  std::size_t t_local = 0;       // 1-based position within the scanned series
  std::int64_t t_original = 0;   // original index of that observation
  double lambda_max = 0.0;
};

// Splits t in [min_side, T - min_side]. Requires T >= 2 * min_side.
LambdaProfile bernoulli_lambda_profile(const MetricSeries& bits, std::size_t min_side = 1);
LambdaProfile bernoulli_lambda_profile(const MetricSeries& bits, ScanRange range);

// Requires min_side >= 2 so both sides carry a variance estimate.
LambdaProfile gaussian_lambda_profile(const MetricSeries& values, std::size_t min_side = 2);
LambdaProfile gaussian_lambda_profile(const MetricSeries& values, ScanRange range);

// Earliest split attaining the maximum lambda.
CandidateChangepoint argmax_candidate(const LambdaProfile& profile,
                                      const MetricSeries& series);

// Bernoulli log-likelihood of `ones` successes in `n` trials at the MLE rate,
// with 0 log 0 = 0.
double bernoulli_segment_loglik(std::int64_t ones, std::int64_t n);

}  // namespace splitcp
