#include "splitcp/hypotests.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <vector>

#include "splitcp/error.hpp"

namespace splitcp {

std::string_view to_string(TestMethod method) noexcept {
  return method == TestMethod::fisher_exact ? "fisher_exact" : "permutation_shift";
}

namespace {

// Relative slack when comparing point probabilities; tables whose
// probability equals the observed one up to rounding count as "as extreme".
constexpr double kFisherRelTol = 1e-7;

double log_choose(std::int64_t n, std::int64_t k) {
  return std::lgamma(static_cast<double>(n) + 1.0) - std::lgamma(static_cast<double>(k) + 1.0) -
         std::lgamma(static_cast<double>(n - k) + 1.0);
}

}  // namespace

TestOutcome fisher_exact(const ContingencyTable& t) {
  if (t.a < 0 || t.b < 0 || t.c < 0 || t.d < 0)
    throw Error(Errc::invalid_argument, "table entries must be nonnegative");
  const std::int64_t row1 = t.a + t.b;
  const std::int64_t row2 = t.c + t.d;
  const std::int64_t col1 = t.a + t.c;
  const std::int64_t col2 = t.b + t.d;
  if (row1 == 0 || row2 == 0 || col1 == 0 || col2 == 0)
    throw Error(Errc::degenerate_table, "table has a zero margin");
  const std::int64_t total = row1 + row2;

  // The a-cell is hypergeometric given the margins.
  const std::int64_t lo = std::max<std::int64_t>(0, col1 - row2);
  const std::int64_t hi = std::min(row1, col1);
  std::vector<double> logp;
  logp.reserve(static_cast<std::size_t>(hi - lo + 1));
  const double log_denominator = log_choose(total, col1);
  for (std::int64_t k = lo; k <= hi; ++k)
    logp.push_back(log_choose(row1, k) + log_choose(row2, col1 - k) - log_denominator);

  // Log-sum-exp over the included tables and over the full support keeps
  // far-tail p-values representable.
  const double observed = logp[static_cast<std::size_t>(t.a - lo)];
  const double log_mode = *std::max_element(logp.begin(), logp.end());
  double tail_max = -std::numeric_limits<double>::infinity();
  for (double lp : logp)
    if (lp <= observed + kFisherRelTol) tail_max = std::max(tail_max, lp);
  double total_mass = 0.0;
  double tail = 0.0;
  for (double lp : logp) {
    total_mass += std::exp(lp - log_mode);
    if (lp <= observed + kFisherRelTol) tail += std::exp(lp - tail_max);
  }
  const double log_p = tail_max + std::log(tail) - log_mode - std::log(total_mass);

  TestOutcome out;
  out.method = TestMethod::fisher_exact;
  out.two_sided = true;
  out.exact = true;
  out.permutations_used = hi - lo + 1;
  out.p_value = std::clamp(std::exp(log_p), 0.0, 1.0);
  out.statistic = static_cast<double>(t.c) / static_cast<double>(row2) -
                  static_cast<double>(t.a) / static_cast<double>(row1);
  return out;
}

double binomial_capped(std::int64_t n, std::int64_t k, double cap) {
  if (k < 0 || k > n) return 0.0;
  k = std::min(k, n - k);
  double value = 1.0;
  for (std::int64_t i = 1; i <= k; ++i) {
    value = value * static_cast<double>(n - k + i) / static_cast<double>(i);
    if (value > cap) return std::numeric_limits<double>::infinity();
  }
  return std::round(value);
}

TestOutcome perm_test_shift(std::span<const double> x, std::span<const double> y,
                            double delta, const PermutationOptions& options) {
  if (x.empty() || y.empty()) throw Error(Errc::empty_sample, "both samples must be nonempty");
  if (!(delta >= 0.0)) throw Error(Errc::invalid_argument, "delta must be nonnegative");
  if (options.n_perm < 1) throw Error(Errc::invalid_argument, "n_perm must be positive");

  const auto nx = static_cast<double>(x.size());
  const auto ny = static_cast<double>(y.size());
  const double mean_x = std::accumulate(x.begin(), x.end(), 0.0) / nx;
  const double mean_y = std::accumulate(y.begin(), y.end(), 0.0) / ny;
  const double d_obs = mean_y - mean_x;
  double direction = d_obs >= 0.0 ? 1.0 : -1.0;
  double shift = d_obs > 0.0 ? delta : (d_obs < 0.0 ? -delta : 0.0);
  if (options.direction != 0) {
    direction = options.direction > 0 ? 1.0 : -1.0;
    shift = direction * delta;
  }

  // Pooled sample: x first, then the shifted y.
  std::vector<double> pooled(x.begin(), x.end());
  for (double v : y) pooled.push_back(v - shift);
  const std::size_t n = pooled.size();
  const std::size_t k = y.size();

  double total = 0.0;
  double scale = 0.0;
  for (double v : pooled) {
    total += v;
    scale = std::max(scale, std::abs(v));
  }
  auto stat_from_sum = [&](double y_sum) { return y_sum / ny - (total - y_sum) / nx; };

  double observed_y_sum = 0.0;
  for (std::size_t i = x.size(); i < n; ++i) observed_y_sum += pooled[i];
  const double observed = stat_from_sum(observed_y_sum);
  // Relabelings tying the observed statistic up to rounding count as extreme.
  const double tol = 1e-9 * std::max(1.0, scale);
  auto extreme = [&](double stat) { return direction * (stat - observed) >= -tol; };

  TestOutcome out;
  out.method = TestMethod::permutation_shift;
  out.two_sided = false;
  out.statistic = observed;
  out.delta = delta;

  const double combos =
      binomial_capped(static_cast<std::int64_t>(n), static_cast<std::int64_t>(k),
                      static_cast<double>(options.exact_limit));
  if (std::isfinite(combos)) {
    // Enumerate k-subsets of the pooled indices in lexicographic order.
    std::vector<std::size_t> pick(k);
    std::iota(pick.begin(), pick.end(), std::size_t{0});
    std::int64_t hits = 0;
    std::int64_t count = 0;
    while (true) {
      double s = 0.0;
      for (std::size_t i : pick) s += pooled[i];
      ++count;
      if (extreme(stat_from_sum(s))) ++hits;
      std::size_t i = k;
      while (i > 0 && pick[i - 1] == n - k + (i - 1)) --i;
      if (i == 0) break;
      ++pick[i - 1];
      for (std::size_t j = i; j < k; ++j) pick[j] = pick[j - 1] + 1;
    }
    out.exact = true;
    out.permutations_used = count;
    out.p_value = static_cast<double>(hits) / static_cast<double>(count);
    return out;
  }

  std::mt19937_64 rng(options.seed);
  std::vector<double> work = pooled;
  std::int64_t hits = 0;
  for (std::int64_t r = 0; r < options.n_perm; ++r) {
    // Partial Fisher-Yates: the first k slots become the relabeled y group.
    double s = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
      std::uniform_int_distribution<std::size_t> pick(i, n - 1);
      std::swap(work[i], work[pick(rng)]);
      s += work[i];
    }
    if (extreme(stat_from_sum(s))) ++hits;
  }
  out.exact = false;
  out.permutations_used = options.n_perm;
  out.seed = options.seed;
  out.p_value = (1.0 + static_cast<double>(hits)) / (1.0 + static_cast<double>(options.n_perm));
  return out;
}

}  // namespace splitcp
