#pragma once

// Reference implementations used only by tests. Each takes a different route
// from the library: per-observation likelihood sums instead of prefix sums,
// integer enumeration instead of log-gamma, bitmask relabeling instead of
// combination walking.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <span>
#include <vector>

namespace splitcp::oracle {

inline double bernoulli_loglik(std::span<const double> seg) {
  double ones = 0.0;
  for (double y : seg) ones += y;
  const double p = ones / static_cast<double>(seg.size());
  double ll = 0.0;
  for (double y : seg) ll += y == 1.0 ? std::log(p) : std::log(1.0 - p);
  return ll;
}

inline double gaussian_loglik(std::span<const double> seg, double floor = 1e-9) {
  const auto n = static_cast<double>(seg.size());
  double mean = 0.0;
  for (double y : seg) mean += y;
  mean /= n;
  double var = 0.0;
  for (double y : seg) var += (y - mean) * (y - mean);
  var = std::max(var / n, floor);
  double ll = 0.0;
  for (double y : seg)
    ll += -0.5 * std::log(2.0 * std::numbers::pi * var) - (y - mean) * (y - mean) / (2.0 * var);
  return ll;
}

// lambda_t for t in [t_min, T - t_min], computed by refitting both segments.
template <typename LogLik>
std::vector<double> brute_profile(std::span<const double> y, std::size_t t_min, LogLik ll) {
  std::vector<double> out;
  const double pooled = ll(y);
  for (std::size_t t = t_min; t + t_min <= y.size(); ++t)
    out.push_back(ll(y.first(t)) + ll(y.subspan(t)) - pooled);
  return out;
}

inline std::uint64_t choose(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  std::uint64_t r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// Two-sided Fisher p from exact integer hypergeometric weights.
inline long double fisher_two_sided(std::int64_t a, std::int64_t b, std::int64_t c, std::int64_t d) {
  const auto r1 = static_cast<std::uint64_t>(a + b);
  const auto r2 = static_cast<std::uint64_t>(c + d);
  const auto c1 = static_cast<std::uint64_t>(a + c);
  const std::uint64_t observed = choose(r1, static_cast<std::uint64_t>(a)) *
                                 choose(r2, static_cast<std::uint64_t>(c));
  std::uint64_t tail = 0;
  std::uint64_t total = 0;
  for (std::uint64_t k = 0; k <= std::min(r1, c1); ++k) {
    if (c1 - k > r2) continue;
    std::uint64_t w = choose(r1, k) * choose(r2, c1 - k);
    total += w;
    if (w <= observed) tail += w;
  }
  return static_cast<long double>(tail) / static_cast<long double>(total);
}

// Exact one-sided shifted permutation p-value by enumerating every bitmask
// with |y| bits set over the pooled sample.
inline double permutation_shift_exact(std::span<const double> x, std::span<const double> y,
                                      double delta) {
  double mx = 0.0, my = 0.0;
  for (double v : x) mx += v;
  for (double v : y) my += v;
  mx /= static_cast<double>(x.size());
  my /= static_cast<double>(y.size());
  const double d = my - mx;
  const double dir = d >= 0.0 ? 1.0 : -1.0;
  const double shift = d > 0.0 ? delta : (d < 0.0 ? -delta : 0.0);
  std::vector<double> pooled(x.begin(), x.end());
  for (double v : y) pooled.push_back(v - shift);
  const std::size_t n = pooled.size();
  const double obs = (my - shift) - mx;
  std::uint64_t hits = 0, count = 0;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    if (static_cast<std::size_t>(__builtin_popcountll(mask)) != y.size()) continue;
    double sy = 0.0, sx = 0.0;
    for (std::size_t i = 0; i < n; ++i) ((mask >> i) & 1 ? sy : sx) += pooled[i];
    const double stat = sy / static_cast<double>(y.size()) - sx / static_cast<double>(x.size());
    ++count;
    if (dir * (stat - obs) >= -1e-9) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(count);
}

}  // namespace splitcp::oracle
