#include "splitcp/detect.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <deque>
#include <exception>
#include <set>
#include <thread>

#include "splitcp/error.hpp"
#include "splitcp/loglik.hpp"
#include "splitcp/seeding.hpp"

namespace splitcp {

std::string_view to_string(TestChoice choice) noexcept {
  switch (choice) {
    case TestChoice::fisher_exact: return "fisher_exact";
    case TestChoice::permutation_shift: return "permutation_shift";
    case TestChoice::automatic: return "auto";
  }
  return "auto";
}

std::string_view to_string(Correction correction) noexcept {
  return correction == Correction::bonferroni ? "bonferroni" : "none";
}

std::string_view to_string(Decision decision) noexcept {
  switch (decision) {
    case Decision::flagged: return "flagged";
    case Decision::not_significant: return "not_significant";
    case Decision::untestable: return "untestable";
    case Decision::segment_too_short: return "segment_too_short";
  }
  return "not_significant";
}

TestChoice parse_test_choice(std::string_view text) {
  if (text == "fisher_exact" || text == "fisher") return TestChoice::fisher_exact;
  if (text == "permutation_shift" || text == "permutation") return TestChoice::permutation_shift;
  if (text == "auto") return TestChoice::automatic;
  throw Error(Errc::invalid_argument, "unknown test '" + std::string(text) + "'");
}

Correction parse_correction(std::string_view text) {
  if (text == "none") return Correction::none;
  if (text == "bonferroni") return Correction::bonferroni;
  throw Error(Errc::invalid_argument, "unknown correction '" + std::string(text) + "'");
}

void validate(const DetectionConfig& config, SeriesKind kind) {
  if (!(config.alpha > 0.0 && config.alpha < 1.0))
    throw Error(Errc::alpha_out_of_range, "alpha must lie in (0, 1)");
  if (!(config.delta >= 0.0) || !std::isfinite(config.delta))
    throw Error(Errc::invalid_argument, "delta must be a nonnegative number");
  if (config.min_segment < 1)
    throw Error(Errc::invalid_argument, "min_segment must be at least 1");
  if (config.n_perm < 1) throw Error(Errc::invalid_argument, "n_perm must be positive");
  if (config.exact_limit < 1)
    throw Error(Errc::invalid_argument, "exact_limit must be positive");
  if (config.min_side) {
    if (*config.min_side < 1) throw Error(Errc::invalid_argument, "min_side must be positive");
    if (kind == SeriesKind::continuous && *config.min_side < 2)
      throw Error(Errc::invalid_argument, "continuous series need min_side >= 2");
  }
  if (config.test == TestChoice::fisher_exact) {
    if (kind == SeriesKind::continuous)
      throw Error(Errc::config_conflict, "fisher_exact needs a binary series");
    if (config.delta > 0.0)
      throw Error(Errc::config_conflict, "fisher_exact does not take a shift; use permutation_shift");
  }
}

TestMethod resolve_test(const DetectionConfig& config, SeriesKind kind) {
  switch (config.test) {
    case TestChoice::fisher_exact: return TestMethod::fisher_exact;
    case TestChoice::permutation_shift: return TestMethod::permutation_shift;
    case TestChoice::automatic:
      return kind == SeriesKind::binary && config.delta == 0.0 ? TestMethod::fisher_exact
                                                               : TestMethod::permutation_shift;
  }
  return TestMethod::permutation_shift;
}

std::size_t resolve_min_side(const DetectionConfig& config, SeriesKind kind) {
  if (config.min_side) return *config.min_side;
  return kind == SeriesKind::binary ? 1 : 2;
}

namespace {

struct SegmentOutcome {
  AuditEntry audit;
  std::optional<FlaggedChangepoint> flag;
};

// Candidate plus the data the confirmation test runs on.
struct Candidate {
  CandidateChangepoint point;
  std::vector<double> before;
  std::vector<double> after;
  // Sign of the shift seen in the selection data; 0 when unknown.
  int direction = 0;
};

std::optional<ScanRange> clamp_range(std::int64_t lo, std::int64_t hi) {
  if (lo < 1 || lo > hi) return std::nullopt;
  return ScanRange{static_cast<std::size_t>(lo), static_cast<std::size_t>(hi)};
}

LambdaProfile profile_for(const MetricSeries& s, ScanRange range) {
  return s.kind() == SeriesKind::binary ? bernoulli_lambda_profile(s, range)
                                        : gaussian_lambda_profile(s, range);
}

void partition(const MetricSeries& s, std::int64_t cut, std::vector<double>& before,
               std::vector<double>& after) {
  for (std::size_t k = 0; k < s.size(); ++k)
    (s.original_index()[k] <= cut ? before : after).push_back(s.values()[k]);
}

double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

// Candidate splits are restricted so that both resulting pieces of the
// segment hold at least min_segment observations.
std::optional<Candidate> find_candidate(const MetricSeries& segment,
                                        const DetectionConfig& config, std::string& note) {
  const auto len = static_cast<std::int64_t>(segment.size());
  const auto m = static_cast<std::int64_t>(config.min_segment);
  const auto side = static_cast<std::int64_t>(resolve_min_side(config, segment.kind()));

  if (!config.use_split) {
    auto range = clamp_range(std::max(side, m), std::min(len - side, len - m));
    if (!range) {
      note = "no admissible candidate split";
      return std::nullopt;
    }
    Candidate c;
    c.point = argmax_candidate(profile_for(segment, *range), segment);
    partition(segment, c.point.t_original, c.before, c.after);
    return c;
  }

  SplitPair halves = split_odd_even(segment);
  const auto odd_n = static_cast<std::int64_t>(halves.odd.size());
  // Odd observation k sits at segment position 2k - 1.
  auto range = clamp_range(std::max(side, (m + 2) / 2),
                           std::min(odd_n - side, (len - m + 1) / 2));
  if (!range) {
    note = "no admissible candidate split";
    return std::nullopt;
  }
  Candidate c;
  c.point = argmax_candidate(profile_for(halves.odd, *range), halves.odd);
  partition(halves.even, c.point.t_original, c.before, c.after);
  std::vector<double> odd_before;
  std::vector<double> odd_after;
  partition(halves.odd, c.point.t_original, odd_before, odd_after);
  const double shift = mean_of(odd_after) - mean_of(odd_before);
  c.direction = shift > 0.0 ? 1 : (shift < 0.0 ? -1 : 0);
  return c;
}

SegmentOutcome test_segment(const MetricSeries& segment, const DetectionConfig& config,
                            TestMethod method, std::size_t& tests_performed) {
  SegmentOutcome out;
  auto& audit = out.audit;
  audit.segment_start = segment.original_index().front();
  audit.segment_end = segment.original_index().back();

  auto candidate = find_candidate(segment, config, audit.note);
  if (!candidate) {
    audit.decision = Decision::untestable;
    return out;
  }
  audit.candidate = candidate->point.t_original;
  audit.candidate_lambda = candidate->point.lambda_max;
  audit.test_before_n = candidate->before.size();
  audit.test_after_n = candidate->after.size();
  if (candidate->before.empty() || candidate->after.empty()) {
    audit.decision = Decision::untestable;
    audit.note = "all test observations fall on one side of the candidate";
    return out;
  }

  ++tests_performed;
  audit.alpha_used = config.correction == Correction::bonferroni
                         ? config.alpha / static_cast<double>(tests_performed)
                         : config.alpha;

  double p = 1.0;
  if (method == TestMethod::fisher_exact) {
    ContingencyTable table;
    for (double v : candidate->before) (v != 0.0 ? table.a : table.b) += 1;
    for (double v : candidate->after) (v != 0.0 ? table.c : table.d) += 1;
    if (table.a + table.c == 0 || table.b + table.d == 0) {
      audit.note = "no variation in test observations";
    } else {
      p = fisher_exact(table).p_value;
    }
  } else {
    PermutationOptions options;
    options.n_perm = config.n_perm;
    options.exact_limit = config.exact_limit;
    // With splitting, the direction comes from the selection half so the
    // one-sided test keeps its level.
    options.direction = candidate->direction;
    options.seed = derive_seed(config.seed, (static_cast<std::uint64_t>(audit.segment_start) << 32) ^
                                                static_cast<std::uint64_t>(audit.segment_end));
    p = perm_test_shift(candidate->before, candidate->after, config.delta, options).p_value;
  }
  audit.p_value = p;
  audit.decision = p <= audit.alpha_used ? Decision::flagged : Decision::not_significant;
  if (audit.decision != Decision::flagged) return out;

  FlaggedChangepoint flag;
  flag.t_original = candidate->point.t_original;
  flag.p_value = p;
  flag.candidate_lambda = candidate->point.lambda_max;
  std::vector<double> before;
  std::vector<double> after;
  partition(segment, flag.t_original, before, after);
  flag.mean_before = mean_of(before);
  flag.mean_after = mean_of(after);
  if (auto offset = segment.offset_of(flag.t_original)) flag.timestamp = segment.timestamp_at(*offset);
  out.flag = flag;
  return out;
}

DetectionResult empty_result(const MetricSeries& series, const DetectionConfig& config) {
  DetectionResult r;
  r.entity_id = series.entity_id();
  r.metric = series.label();
  r.config = config;
  r.method = resolve_test(config, series.kind());
  return r;
}

}  // namespace

DetectionResult detect_single(const MetricSeries& series, const DetectionConfig& config) {
  validate(config, series.kind());
  const std::size_t need =
      2 * std::max({config.min_segment, resolve_min_side(config, series.kind()), std::size_t{2}});
  if (series.size() < need)
    throw Error(Errc::too_short, "series of length " + std::to_string(series.size()) +
                                     " needs at least " + std::to_string(need));
  DetectionResult result = empty_result(series, config);
  std::size_t tests = 0;
  auto outcome = test_segment(series, config, result.method, tests);
  result.audit.push_back(outcome.audit);
  if (outcome.flag) result.changepoints.push_back(*outcome.flag);
  return result;
}

DetectionResult detect_multiple(const MetricSeries& series, const DetectionConfig& config) {
  validate(config, series.kind());
  const std::size_t floor_len =
      2 * std::max(resolve_min_side(config, series.kind()), std::size_t{2});
  if (series.size() < floor_len)
    throw Error(Errc::too_short, "series of length " + std::to_string(series.size()) +
                                     " needs at least " + std::to_string(floor_len));

  DetectionResult result = empty_result(series, config);
  const std::size_t m = config.min_segment;
  std::size_t tests = 0;
  // 1-based inclusive positions within `series`; FIFO order.
  std::deque<std::pair<std::size_t, std::size_t>> segments{{1, series.size()}};
  while (!segments.empty()) {
    auto [first, last] = segments.front();
    segments.pop_front();
    const std::size_t len = last - first + 1;
    if (len < 2 * m) {
      AuditEntry skipped;
      skipped.segment_start = series.original_index()[first - 1];
      skipped.segment_end = series.original_index()[last - 1];
      skipped.decision = Decision::segment_too_short;
      skipped.note = "segment shorter than 2 * min_segment";
      result.audit.push_back(std::move(skipped));
      continue;
    }
    auto outcome = test_segment(series.slice(first, last), config, result.method, tests);
    result.audit.push_back(outcome.audit);
    if (!outcome.flag) continue;

    const std::size_t cut = *series.offset_of(outcome.flag->t_original) + 1;
    if (cut - first + 1 >= m) segments.emplace_back(first, cut);
    if (last - cut >= m) segments.emplace_back(cut + 1, last);
    result.changepoints.push_back(*outcome.flag);
  }
  std::sort(result.changepoints.begin(), result.changepoints.end(),
            [](const auto& a, const auto& b) { return a.t_original < b.t_original; });
  return result;
}

CohortResult detect_cohort(std::span<const MetricSeries> players,
                           const DetectionConfig& config, std::size_t parallelism) {
  std::set<std::string> seen;
  for (const auto& p : players) {
    if (!seen.insert(p.entity_id()).second)
      throw Error(Errc::duplicate_entity, "duplicate entity_id '" + p.entity_id() + "'");
    validate(config, p.kind());
  }

  std::vector<std::optional<DetectionResult>> slots(players.size());
  std::vector<std::exception_ptr> errors(players.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < players.size(); i = next++) {
      try {
        DetectionConfig local = config;
        local.seed = derive_seed(config.seed, players[i].entity_id());
        slots[i] = detect_multiple(players[i], local);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const std::size_t threads = std::clamp<std::size_t>(parallelism, 1, std::max<std::size_t>(players.size(), 1));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);

  CohortResult cohort;
  cohort.players = players.size();
  for (auto& slot : slots) {
    if (!slot->changepoints.empty()) ++cohort.flagged_players;
    cohort.total_changepoints += slot->changepoints.size();
    std::string id = slot->entity_id;
    cohort.results.emplace(std::move(id), std::move(*slot));
  }
  return cohort;
}

}  // namespace splitcp
