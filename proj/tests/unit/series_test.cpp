#include "splitcp/series.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "splitcp/error.hpp"

namespace splitcp {
namespace {

Errc error_code(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an Error";
  return Errc::invalid_argument;
}

TEST(Series, AssignsOneBasedIndices) {
  auto s = new_metric_series({1, 0, 1}, SeriesKind::binary, "b1", "chase");
  EXPECT_EQ(s.size(), 3u);
  EXPECT_EQ(std::vector<std::int64_t>(s.original_index().begin(), s.original_index().end()),
            (std::vector<std::int64_t>{1, 2, 3}));
  EXPECT_EQ(s.entity_id(), "b1");
  EXPECT_EQ(s.label(), "chase");

  auto v = new_metric_series({94.2, 95.1}, SeriesKind::continuous, "p1", "ff_velo");
  EXPECT_EQ(v.size(), 2u);
  EXPECT_EQ(v.kind(), SeriesKind::continuous);
}

TEST(Series, RejectsBadInput) {
  EXPECT_EQ(error_code([] { new_metric_series({1, 0.5}, SeriesKind::binary, "x", "y"); }),
            Errc::non_binary_value);
  EXPECT_EQ(error_code([] { new_metric_series({}, SeriesKind::binary, "x", "y"); }),
            Errc::empty_input);
  EXPECT_EQ(error_code([] {
              MetricSeries({1, 2}, {2, 2}, SeriesKind::continuous, "x", "y");
            }),
            Errc::invalid_argument);
}

TEST(Series, SplitOddEven) {
  auto s = new_metric_series({10, 20, 30, 40, 50}, SeriesKind::continuous, "e", "m");
  auto [odd, even] = split_odd_even(s);
  EXPECT_EQ(std::vector<double>(odd.values().begin(), odd.values().end()),
            (std::vector<double>{10, 30, 50}));
  EXPECT_EQ(std::vector<std::int64_t>(odd.original_index().begin(), odd.original_index().end()),
            (std::vector<std::int64_t>{1, 3, 5}));
  EXPECT_EQ(std::vector<double>(even.values().begin(), even.values().end()),
            (std::vector<double>{20, 40}));
  EXPECT_EQ(std::vector<std::int64_t>(even.original_index().begin(), even.original_index().end()),
            (std::vector<std::int64_t>{2, 4}));

  auto two = split_odd_even(new_metric_series({7, 8}, SeriesKind::continuous, "e", "m"));
  EXPECT_EQ(two.odd.values()[0], 7);
  EXPECT_EQ(two.even.values()[0], 8);

  EXPECT_EQ(error_code([] {
              split_odd_even(new_metric_series({1}, SeriesKind::continuous, "e", "m"));
            }),
            Errc::too_short);
}

TEST(Series, SplitKeepsParentIndicesOnSlices) {
  auto s = new_metric_series({0, 1, 2, 3, 4, 5, 6}, SeriesKind::continuous, "e", "m");
  auto tail = s.slice(4, 7);  // original 4..7
  auto [odd, even] = split_odd_even(tail);
  EXPECT_EQ(odd.original_index()[0], 4);
  EXPECT_EQ(even.original_index()[0], 5);
}

// Interleaving the halves by original index rebuilds the parent; sizes differ
// by at most one in favour of the odd half.
TEST(Series, SplitInterleaveProperty) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    std::size_t n = 2 + rng() % 60;
    std::vector<double> v(n);
    for (auto& x : v) x = std::uniform_real_distribution<double>(-5, 5)(rng);
    auto s = new_metric_series(v, SeriesKind::continuous, "e", "m");
    auto [odd, even] = split_odd_even(s);
    ASSERT_TRUE(odd.size() - even.size() == 0 || odd.size() - even.size() == 1);
    std::vector<std::pair<std::int64_t, double>> merged;
    for (std::size_t k = 0; k < odd.size(); ++k)
      merged.emplace_back(odd.original_index()[k], odd.values()[k]);
    for (std::size_t k = 0; k < even.size(); ++k)
      merged.emplace_back(even.original_index()[k], even.values()[k]);
    std::sort(merged.begin(), merged.end());
    ASSERT_EQ(merged.size(), n);
    for (std::size_t k = 0; k < n; ++k) {
      EXPECT_EQ(merged[k].first, s.original_index()[k]);
      EXPECT_EQ(merged[k].second, s.values()[k]);
    }
  }
}

TEST(Series, RollingMean) {
  auto s = new_metric_series({0, 1, 1, 1}, SeriesKind::binary, "e", "whiff");
  EXPECT_EQ(rolling_mean(s, 2), (std::vector<double>{0.5, 1.0, 1.0}));

  auto c = new_metric_series(std::vector<double>(9, 0.3), SeriesKind::continuous, "e", "m");
  for (std::size_t w : {1u, 4u, 9u})
    for (double m : rolling_mean(c, w)) EXPECT_DOUBLE_EQ(m, 0.3);

  EXPECT_EQ(error_code([] {
              rolling_mean(new_metric_series({1, 0}, SeriesKind::binary, "e", "m"), 3);
            }),
            Errc::window_too_large);
}

TEST(Series, RollingMeanStaysInRange) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    std::size_t n = 1 + rng() % 80;
    std::vector<double> v(n);
    for (auto& x : v) x = std::normal_distribution<double>(90, 3)(rng);
    auto s = new_metric_series(v, SeriesKind::continuous, "e", "m");
    auto [lo, hi] = std::minmax_element(v.begin(), v.end());
    std::size_t w = 1 + rng() % n;
    auto out = rolling_mean(s, w);
    EXPECT_EQ(out.size(), n - w + 1);
    for (double m : out) {
      EXPECT_GE(m, *lo);
      EXPECT_LE(m, *hi);
    }
  }
}

}  // namespace
}  // namespace splitcp
