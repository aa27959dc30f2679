#include "splitcp/loglik.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "splitcp/error.hpp"

namespace splitcp {

namespace {

double xlogx_over(double k, double n) { return k > 0.0 ? k * std::log(k / n) : 0.0; }

void check_range(const MetricSeries& s, ScanRange range, std::size_t floor_side) {
  const std::size_t n = s.size();
  if (range.t_min < floor_side || range.t_max + floor_side > n || range.t_min > range.t_max)
    throw Error(Errc::too_short, "series of length " + std::to_string(n) +
                                     " has no admissible split in [" +
                                     std::to_string(range.t_min) + ", " +
                                     std::to_string(range.t_max) + "]");
}

ScanRange range_from_min_side(const MetricSeries& s, std::size_t min_side) {
  if (s.size() < 2 * min_side)
    throw Error(Errc::too_short, "series of length " + std::to_string(s.size()) +
                                     " is shorter than 2 * min_side");
  return ScanRange{min_side, s.size() - min_side};
}

// Gaussian log-likelihood at the MLE mean and variance, given segment length
// and centered sums.
double gaussian_segment_loglik(double n, double sum, double sum_sq) {
  double mean = sum / n;
  double var = std::max(sum_sq / n - mean * mean, kGaussianVarianceFloor);
  return -0.5 * n * std::log(2.0 * std::numbers::pi * var) - 0.5 * n;
}

}  // namespace

double bernoulli_segment_loglik(std::int64_t ones, std::int64_t n) {
  auto k = static_cast<double>(ones);
  auto m = static_cast<double>(n);
  return xlogx_over(k, m) + xlogx_over(m - k, m);
}

LambdaProfile bernoulli_lambda_profile(const MetricSeries& bits, std::size_t min_side) {
  if (min_side < 1) throw Error(Errc::invalid_argument, "min_side must be at least 1");
  return bernoulli_lambda_profile(bits, range_from_min_side(bits, min_side));
}

LambdaProfile bernoulli_lambda_profile(const MetricSeries& bits, ScanRange range) {
  if (bits.kind() != SeriesKind::binary)
    throw Error(Errc::invalid_argument, "bernoulli profile needs a binary series");
  check_range(bits, range, 1);

  const auto v = bits.values();
  const auto total_n = static_cast<std::int64_t>(v.size());
  std::vector<std::int64_t> ones(v.size() + 1, 0);
  for (std::size_t k = 0; k < v.size(); ++k) ones[k + 1] = ones[k] + (v[k] != 0.0 ? 1 : 0);
  const double pooled = bernoulli_segment_loglik(ones.back(), total_n);

  LambdaProfile profile;
  profile.kind = ProfileKind::bernoulli;
  profile.t_range = range;
  profile.lambda.reserve(range.t_max - range.t_min + 1);
  for (std::size_t t = range.t_min; t <= range.t_max; ++t) {
    auto left_n = static_cast<std::int64_t>(t);
    double ell = bernoulli_segment_loglik(ones[t], left_n) +
                 bernoulli_segment_loglik(ones.back() - ones[t], total_n - left_n);
    profile.lambda.push_back(std::max(0.0, ell - pooled));
  }
  return profile;
}

LambdaProfile gaussian_lambda_profile(const MetricSeries& values, std::size_t min_side) {
  if (min_side < 2) throw Error(Errc::invalid_argument, "gaussian min_side must be at least 2");
  return gaussian_lambda_profile(values, range_from_min_side(values, min_side));
}

LambdaProfile gaussian_lambda_profile(const MetricSeries& values, ScanRange range) {
  check_range(values, range, 2);

  // Center on the pooled mean first: the statistic is shift invariant and the
  // sums-of-squares then avoid cancellation for data like 95 mph +- 1.
  const auto v = values.values();
  const double center = values.mean();
  std::vector<double> sum(v.size() + 1, 0.0);
  std::vector<double> sum_sq(v.size() + 1, 0.0);
  for (std::size_t k = 0; k < v.size(); ++k) {
    double x = v[k] - center;
    sum[k + 1] = sum[k] + x;
    sum_sq[k + 1] = sum_sq[k] + x * x;
  }
  const auto total_n = static_cast<double>(v.size());
  const double pooled = gaussian_segment_loglik(total_n, sum.back(), sum_sq.back());

  LambdaProfile profile;
  profile.kind = ProfileKind::gaussian;
  profile.t_range = range;
  profile.lambda.reserve(range.t_max - range.t_min + 1);
  for (std::size_t t = range.t_min; t <= range.t_max; ++t) {
    auto left_n = static_cast<double>(t);
    double ell = gaussian_segment_loglik(left_n, sum[t], sum_sq[t]) +
                 gaussian_segment_loglik(total_n - left_n, sum.back() - sum[t],
                                         sum_sq.back() - sum_sq[t]);
    profile.lambda.push_back(std::max(0.0, ell - pooled));
  }
  return profile;
}

CandidateChangepoint argmax_candidate(const LambdaProfile& profile,
                                      const MetricSeries& series) {
  if (profile.empty()) throw Error(Errc::invalid_argument, "empty lambda profile");
  if (profile.t_range.t_max > series.size())
    throw Error(Errc::invalid_argument, "profile range exceeds series length");
  // max_element returns the first maximum, which is the tie rule we want.
  auto it = std::max_element(profile.lambda.begin(), profile.lambda.end());
  CandidateChangepoint c;
  c.t_local = profile.t_range.t_min + static_cast<std::size_t>(it - profile.lambda.begin());
  c.t_original = series.original_index()[c.t_local - 1];
  c.lambda_max = *it;
  return c;
}

}  // namespace splitcp
