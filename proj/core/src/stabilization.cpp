#include "splitcp/stabilization.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "splitcp/error.hpp"

namespace splitcp {

namespace {

void check_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw Error(Errc::alpha_out_of_range, "alpha must lie in (0, 1)");
}

}  // namespace

double latent_sd(double sigma_obs, double sigma_samp) {
  if (sigma_obs < 0.0 || sigma_samp < 0.0)
    throw Error(Errc::invalid_argument, "standard deviations must be nonnegative");
  double obs2 = sigma_obs * sigma_obs;
  double samp2 = sigma_samp * sigma_samp;
  double diff = obs2 - samp2;
  double scale = std::max(obs2, samp2);
  if (diff < -1e-9 * scale)
    throw Error(Errc::negative_latent_variance,
                "sampling spread exceeds observed spread across players");
  return std::sqrt(std::max(diff, 0.0));
}

std::int64_t stabilization_point(double p_hat, double sigma_latent) {
  if (!(p_hat >= 0.0 && p_hat <= 1.0))
    throw Error(Errc::invalid_argument, "p_hat must lie in [0, 1]");
  if (p_hat == 0.0 || p_hat == 1.0) return 1;
  if (!(sigma_latent > 0.0))
    throw Error(Errc::unstable_metric, "zero latent spread: no finite stabilization point");
  double n = p_hat * (1.0 - p_hat) / (sigma_latent * sigma_latent);
  // Guard against 66.0000000001 style representation noise before ceil.
  double rounded = std::round(n);
  if (std::abs(n - rounded) < 1e-9 * std::max(1.0, n)) n = rounded;
  return std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil(n)));
}

StabilizationReport cohort_stabilization(std::span<const PlayerCounts> per_player,
                                         std::string metric) {
  if (per_player.size() < 2)
    throw Error(Errc::too_few_players, "need at least 2 players");
  std::vector<double> rates;
  rates.reserve(per_player.size());
  double samp_var_sum = 0.0;
  for (const auto& p : per_player) {
    if (p.trials <= 0) throw Error(Errc::invalid_argument, "trial count must be positive");
    if (p.successes < 0 || p.successes > p.trials)
      throw Error(Errc::invalid_argument, "successes must lie in [0, trials]");
    double rate = static_cast<double>(p.successes) / static_cast<double>(p.trials);
    rates.push_back(rate);
    samp_var_sum += rate * (1.0 - rate) / static_cast<double>(p.trials);
  }
  const auto n = static_cast<double>(rates.size());

  double mean = 0.0;
  for (double r : rates) mean += r;
  mean /= n;
  double ss = 0.0;
  for (double r : rates) ss += (r - mean) * (r - mean);

  StabilizationReport report;
  report.metric = std::move(metric);
  report.player_count = static_cast<std::int64_t>(rates.size());
  report.p_hat = mean;
  report.sigma_obs = std::sqrt(ss / (n - 1.0));
  report.sigma_samp = std::sqrt(samp_var_sum / n);
  report.sigma_latent = latent_sd(report.sigma_obs, report.sigma_samp);
  report.n_stable = stabilization_point(report.p_hat, report.sigma_latent);
  return report;
}

ConfidenceInterval hoeffding_interval(double mean, std::int64_t t, double alpha,
                                      Bounds bounds) {
  check_alpha(alpha);
  if (t < 1) throw Error(Errc::invalid_argument, "t must be at least 1");
  if (!(bounds.lower < bounds.upper))
    throw Error(Errc::invalid_argument, "bounds must satisfy a < b");
  if (mean < bounds.lower || mean > bounds.upper)
    throw Error(Errc::value_out_of_bounds, "mean outside declared bounds");

  ConfidenceInterval ci;
  ci.center = mean;
  ci.t = t;
  ci.alpha = alpha;
  ci.bounds = bounds;
  ci.half_width = (bounds.upper - bounds.lower) *
                  std::sqrt(std::log(2.0 / alpha) / (2.0 * static_cast<double>(t)));
  ci.lower = std::max(bounds.lower, mean - ci.half_width);
  ci.upper = std::min(bounds.upper, mean + ci.half_width);
  return ci;
}

std::vector<ConfidenceInterval> confidence_sequence(const MetricSeries& series,
                                                    const ConfidenceSequenceOptions& options) {
  check_alpha(options.alpha);
  for (double v : series.values()) {
    if (v < options.bounds.lower || v > options.bounds.upper)
      throw Error(Errc::value_out_of_bounds,
                  "value " + std::to_string(v) + " outside declared bounds");
  }
  std::vector<ConfidenceInterval> out;
  out.reserve(series.size());
  double sum = 0.0;
  std::int64_t t = 0;
  for (double v : series.values()) {
    sum += v;
    ++t;
    double mean = std::clamp(sum / static_cast<double>(t), options.bounds.lower,
                             options.bounds.upper);
    double alpha_t = options.alpha;
    if (options.union_bound)
      alpha_t = options.alpha / (static_cast<double>(t) * static_cast<double>(t + 1));
    auto ci = hoeffding_interval(mean, t, alpha_t, options.bounds);
    ci.alpha = options.alpha;
    out.push_back(ci);
  }
  return out;
}

std::string stabilization_csv_header() {
  return "metric,p_hat,sigma_obs,sigma_samp,sigma_latent,n_stable";
}

std::string to_csv_row(const StabilizationReport& report) {
  std::ostringstream os;
  os.precision(6);
  os << report.metric << ',' << report.p_hat << ',' << report.sigma_obs << ','
     << report.sigma_samp << ',' << report.sigma_latent << ',' << report.n_stable;
  return os.str();
}

}  // namespace splitcp
