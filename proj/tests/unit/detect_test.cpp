#include "splitcp/detect.hpp"

#include <gtest/gtest.h>

#include <random>

#include "splitcp/error.hpp"
#include "splitcp/seeding.hpp"

namespace splitcp {
namespace {

MetricSeries bits(std::vector<double> v, std::string id = "e") {
  return new_metric_series(std::move(v), SeriesKind::binary, std::move(id), "chase");
}

std::vector<double> bernoulli_run(std::mt19937_64& rng, std::initializer_list<std::pair<int, double>> segs) {
  std::vector<double> out;
  for (auto [n, p] : segs)
    for (int i = 0; i < n; ++i) out.push_back(std::bernoulli_distribution(p)(rng) ? 1.0 : 0.0);
  return out;
}

TEST(DetectConfig, Validation) {
  DetectionConfig c;
  c.test = TestChoice::fisher_exact;
  EXPECT_THROW(validate(c, SeriesKind::continuous), Error);
  c.delta = 1.0;
  try {
    validate(c, SeriesKind::binary);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::config_conflict);
  }
  DetectionConfig bad;
  bad.alpha = 1.0;
  try {
    validate(bad, SeriesKind::binary);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::alpha_out_of_range);
  }
}

TEST(DetectConfig, AutoResolution) {
  DetectionConfig c;
  EXPECT_EQ(resolve_test(c, SeriesKind::binary), TestMethod::fisher_exact);
  EXPECT_EQ(resolve_test(c, SeriesKind::continuous), TestMethod::permutation_shift);
  c.delta = 0.1;
  EXPECT_EQ(resolve_test(c, SeriesKind::binary), TestMethod::permutation_shift);
  EXPECT_EQ(parse_test_choice("auto"), TestChoice::automatic);
  EXPECT_EQ(parse_correction("bonferroni"), Correction::bonferroni);
  EXPECT_THROW(parse_test_choice("welch"), Error);
}

TEST(DetectSingle, StepSeries) {
  std::vector<double> v(400, 0.0);
  std::fill(v.begin() + 200, v.end(), 1.0);
  auto r = detect_single(bits(v), {});
  ASSERT_EQ(r.changepoints.size(), 1u);
  const auto& cp = r.changepoints[0];
  EXPECT_TRUE(cp.t_original == 199 || cp.t_original == 200) << cp.t_original;
  EXPECT_LT(cp.p_value, 1e-20);
  EXPECT_EQ(r.method, TestMethod::fisher_exact);
  ASSERT_EQ(r.audit.size(), 1u);
  EXPECT_EQ(r.audit[0].decision, Decision::flagged);
  EXPECT_EQ(r.audit[0].test_before_n + r.audit[0].test_after_n, 200u);
}

TEST(DetectSingle, ConstantSeries) {
  auto r = detect_single(bits(std::vector<double>(400, 1.0)), {});
  EXPECT_TRUE(r.changepoints.empty());
  ASSERT_EQ(r.audit.size(), 1u);
  ASSERT_TRUE(r.audit[0].p_value.has_value());
  EXPECT_EQ(*r.audit[0].p_value, 1.0);
}

TEST(DetectSingle, GaussianShiftWithDelta) {
  std::mt19937_64 rng(42);
  std::vector<double> v;
  for (int i = 0; i < 300; ++i) v.push_back(std::normal_distribution<double>(95, 1.2)(rng));
  for (int i = 0; i < 300; ++i) v.push_back(std::normal_distribution<double>(89.5, 1.2)(rng));
  DetectionConfig c;
  c.delta = 5.0;
  c.seed = 3;
  auto r = detect_single(new_metric_series(v, SeriesKind::continuous, "p1", "velocity_SI"), c);
  ASSERT_EQ(r.changepoints.size(), 1u);
  const double drop = r.changepoints[0].mean_before - r.changepoints[0].mean_after;
  EXPECT_GE(drop, 5.0);
  EXPECT_LE(drop, 6.0);
  EXPECT_EQ(r.method, TestMethod::permutation_shift);
}

TEST(DetectSingle, TooShort) {
  try {
    detect_single(bits(std::vector<double>(99, 0.0)), {});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::too_short);
  }
}

TEST(DetectSingle, NoAdmissibleSplitIsUntestable) {
  DetectionConfig c;
  c.min_segment = 2;
  auto r = detect_single(bits({0, 0, 1, 1}), c);
  EXPECT_TRUE(r.changepoints.empty());
  ASSERT_EQ(r.audit.size(), 1u);
  EXPECT_EQ(r.audit[0].decision, Decision::untestable);
  EXPECT_FALSE(r.audit[0].note.empty());
}

TEST(DetectSingle, NoSplitUsesAllData) {
  std::vector<double> v(400, 0.0);
  std::fill(v.begin() + 200, v.end(), 1.0);
  DetectionConfig c;
  c.use_split = false;
  auto r = detect_single(bits(v), c);
  ASSERT_EQ(r.changepoints.size(), 1u);
  EXPECT_EQ(r.changepoints[0].t_original, 200);
  EXPECT_EQ(r.audit[0].test_before_n, 200u);
  EXPECT_EQ(r.audit[0].test_after_n, 200u);
}

TEST(DetectSingle, CarriesTimestamp) {
  std::vector<double> v(200, 0.0);
  std::fill(v.begin() + 100, v.end(), 1.0);
  std::vector<std::int64_t> idx(200);
  std::vector<std::string> ts(200);
  for (std::size_t i = 0; i < 200; ++i) {
    idx[i] = static_cast<std::int64_t>(i + 1);
    ts[i] = "day" + std::to_string(i + 1);
  }
  MetricSeries s(v, idx, SeriesKind::binary, "e", "whiff", ts);
  auto r = detect_single(s, {});
  ASSERT_EQ(r.changepoints.size(), 1u);
  ASSERT_TRUE(r.changepoints[0].timestamp.has_value());
  EXPECT_EQ(*r.changepoints[0].timestamp, "day" + std::to_string(r.changepoints[0].t_original));
}

// Both planted changes recovered within 40 observations. Uncorrected tests on
// the null child segments add an occasional third flag, which is allowed.
TEST(DetectMultiple, TwoChanges) {
  int hits = 0;
  for (int rep = 0; rep < 200; ++rep) {
    std::mt19937_64 rng(derive_seed(1000, static_cast<std::uint64_t>(rep)));
    auto r = detect_multiple(bits(bernoulli_run(rng, {{200, 0.1}, {200, 0.5}, {200, 0.1}})), {});
    bool first = false;
    bool second = false;
    for (const auto& cp : r.changepoints) {
      first = first || std::abs(cp.t_original - 200) <= 40;
      second = second || std::abs(cp.t_original - 400) <= 40;
    }
    if (first && second) ++hits;
  }
  EXPECT_GE(hits, 180);
}

TEST(DetectMultiple, GaussianNullCalibration) {
  const int reps = 400;
  int flagged = 0;
  DetectionConfig c;
  c.n_perm = 199;
  for (int rep = 0; rep < reps; ++rep) {
    std::mt19937_64 rng(derive_seed(31, static_cast<std::uint64_t>(rep)));
    std::vector<double> v(300);
    for (auto& x : v) x = std::normal_distribution<double>(93, 1.1)(rng);
    c.seed = static_cast<std::uint64_t>(rep);
    auto r = detect_single(new_metric_series(v, SeriesKind::continuous, "g", "velo"), c);
    if (!r.changepoints.empty()) ++flagged;
  }
  EXPECT_LE(static_cast<double>(flagged) / reps, 0.05 + 3 * std::sqrt(0.05 * 0.95 / reps));
}

TEST(DetectMultiple, ConstantSeries) {
  auto r = detect_multiple(bits(std::vector<double>(300, 0.0)), {});
  EXPECT_TRUE(r.changepoints.empty());
}

TEST(DetectMultiple, ShortRootIsNeverSplit) {
  std::mt19937_64 rng(1);
  DetectionConfig c;
  c.min_segment = 100;
  auto r = detect_multiple(bits(bernoulli_run(rng, {{75, 0.1}, {75, 0.9}})), c);
  EXPECT_TRUE(r.changepoints.empty());
  ASSERT_EQ(r.audit.size(), 1u);
  EXPECT_EQ(r.audit[0].decision, Decision::segment_too_short);
  EXPECT_EQ(r.audit[0].segment_start, 1);
  EXPECT_EQ(r.audit[0].segment_end, 150);
}

TEST(DetectMultiple, SegmentsRespectMinimumLength) {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    std::mt19937_64 rng(seed);
    DetectionConfig c;
    c.min_segment = 30;
    auto v = bernoulli_run(rng, {{90, 0.1}, {60, 0.8}, {120, 0.3}, {50, 0.9}});
    auto r = detect_multiple(bits(v), c);
    std::int64_t prev = 0;
    for (const auto& cp : r.changepoints) {
      EXPECT_GE(cp.t_original - prev, 30);
      prev = cp.t_original;
    }
    EXPECT_GE(static_cast<std::int64_t>(v.size()) - prev, 30);
    for (const auto& a : r.audit) {
      if (a.decision == Decision::flagged) {
        EXPECT_LE(*a.p_value, a.alpha_used);
      }
    }
  }
}

TEST(DetectMultiple, BonferroniUsesRunningCount) {
  std::mt19937_64 rng(5);
  DetectionConfig c;
  c.correction = Correction::bonferroni;
  auto r = detect_multiple(bits(bernoulli_run(rng, {{200, 0.05}, {200, 0.7}, {200, 0.05}})), c);
  std::size_t tested = 0;
  for (const auto& a : r.audit) {
    if (!a.p_value) continue;
    ++tested;
    EXPECT_DOUBLE_EQ(a.alpha_used, c.alpha / static_cast<double>(tested));
  }
  EXPECT_GE(tested, 3u);
}

TEST(DetectMultiple, Deterministic) {
  std::mt19937_64 rng(8);
  std::vector<double> v;
  for (int i = 0; i < 500; ++i) v.push_back(std::normal_distribution<double>(i < 250 ? 93 : 91.5, 1)(rng));
  auto s = new_metric_series(v, SeriesKind::continuous, "p", "velocity_FF");
  DetectionConfig c;
  c.delta = 0.5;
  c.seed = 11;
  auto a = detect_multiple(s, c);
  auto b = detect_multiple(s, c);
  ASSERT_EQ(a.changepoints.size(), b.changepoints.size());
  for (std::size_t i = 0; i < a.changepoints.size(); ++i) {
    EXPECT_EQ(a.changepoints[i].t_original, b.changepoints[i].t_original);
    EXPECT_EQ(a.changepoints[i].p_value, b.changepoints[i].p_value);
  }
}

TEST(DetectCohort, ParallelismDoesNotChangeResults) {
  std::vector<MetricSeries> players;
  for (int i = 0; i < 40; ++i) {
    std::mt19937_64 rng(static_cast<std::uint64_t>(i));
    std::vector<double> v;
    for (int k = 0; k < 300; ++k)
      v.push_back(std::normal_distribution<double>(k < 150 || i % 3 ? 94 : 92, 1)(rng));
    players.push_back(new_metric_series(v, SeriesKind::continuous, "p" + std::to_string(i), "velo"));
  }
  DetectionConfig c;
  c.seed = 99;
  c.n_perm = 300;
  auto serial = detect_cohort(players, c, 1);
  auto parallel = detect_cohort(players, c, 8);
  EXPECT_EQ(serial.players, 40u);
  EXPECT_EQ(serial.flagged_players, parallel.flagged_players);
  EXPECT_EQ(serial.total_changepoints, parallel.total_changepoints);
  EXPECT_GE(serial.flagged_players, 10u);
  for (const auto& [id, r] : serial.results) {
    const auto& other = parallel.results.at(id);
    EXPECT_EQ(r.config.seed, derive_seed(99, id));
    ASSERT_EQ(r.changepoints.size(), other.changepoints.size());
    for (std::size_t i = 0; i < r.changepoints.size(); ++i) {
      EXPECT_EQ(r.changepoints[i].t_original, other.changepoints[i].t_original);
      EXPECT_EQ(r.changepoints[i].p_value, other.changepoints[i].p_value);
    }
    // Serial detect_multiple with the derived seed agrees too.
    DetectionConfig local = c;
    local.seed = derive_seed(99, id);
    auto direct = detect_multiple(players[std::stoul(id.substr(1))], local);
    EXPECT_EQ(direct.changepoints.size(), r.changepoints.size());
  }
}

TEST(DetectCohort, DuplicateEntity) {
  std::vector<MetricSeries> players{bits(std::vector<double>(200, 0.0), "x"),
                                    bits(std::vector<double>(200, 1.0), "x")};
  try {
    detect_cohort(players, {}, 2);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::duplicate_entity);
  }
}

TEST(DetectCohort, NullCalibration) {
  std::vector<MetricSeries> players;
  for (int i = 0; i < 1000; ++i) {
    std::mt19937_64 rng(derive_seed(7, static_cast<std::uint64_t>(i)));
    players.push_back(bits(bernoulli_run(rng, {{400, 0.3}}), "b" + std::to_string(i)));
  }
  DetectionConfig split;
  auto with = detect_cohort(players, split, 4);
  DetectionConfig nosplit;
  nosplit.use_split = false;
  auto without = detect_cohort(players, nosplit, 4);
  const double rs = static_cast<double>(with.flagged_players) / 1000.0;
  const double rn = static_cast<double>(without.flagged_players) / 1000.0;
  EXPECT_LE(rs, 0.064);
  EXPECT_GE(rn, 3 * rs);
}

}  // namespace
}  // namespace splitcp
