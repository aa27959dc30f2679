#include "splitcp/simgen.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <random>
#include <thread>

#include "splitcp/error.hpp"
#include "splitcp/seeding.hpp"

namespace splitcp {

std::size_t PlantedSpec::n() const noexcept {
  std::size_t total = 0;
  for (const auto& s : segments) total += s.length;
  return total;
}

std::vector<std::int64_t> PlantedSpec::planted_changes() const {
  std::vector<std::int64_t> out;
  std::int64_t at = 0;
  for (std::size_t i = 0; i + 1 < segments.size(); ++i) {
    at += static_cast<std::int64_t>(segments[i].length);
    out.push_back(at);
  }
  return out;
}

void validate(const PlantedSpec& spec) {
  if (spec.segments.empty()) throw Error(Errc::invalid_spec, "spec has no segments");
  for (const auto& s : spec.segments) {
    if (s.length == 0) throw Error(Errc::invalid_spec, "segment length must be positive");
    if (spec.kind == ProfileKind::bernoulli && !(s.p >= 0.0 && s.p <= 1.0))
      throw Error(Errc::invalid_spec, "bernoulli p must lie in [0, 1]");
    if (spec.kind == ProfileKind::gaussian && (!(s.sigma > 0.0) || !std::isfinite(s.mu)))
      throw Error(Errc::invalid_spec, "gaussian segments need finite mu and sigma > 0");
  }
}

MetricSeries generate(const PlantedSpec& spec, std::string entity_id, std::string label) {
  validate(spec);
  std::mt19937_64 rng(spec.seed);
  std::vector<double> values;
  values.reserve(spec.n());
  for (const auto& s : spec.segments) {
    if (spec.kind == ProfileKind::bernoulli) {
      std::bernoulli_distribution draw(s.p);
      for (std::size_t i = 0; i < s.length; ++i) values.push_back(draw(rng) ? 1.0 : 0.0);
    } else {
      std::normal_distribution<double> draw(s.mu, s.sigma);
      for (std::size_t i = 0; i < s.length; ++i) values.push_back(draw(rng));
    }
  }
  const auto kind =
      spec.kind == ProfileKind::bernoulli ? SeriesKind::binary : SeriesKind::continuous;
  return MetricSeries::create(std::move(values), kind, std::move(entity_id), std::move(label));
}

namespace {

struct RepOutcome {
  bool flagged = false;
  std::optional<double> loc_error;
};

RepOutcome run_rep(const PlantedSpec& spec, const DetectionConfig& config, std::uint64_t seed,
                   std::size_t rep, const std::vector<std::int64_t>& planted) {
  PlantedSpec draw = spec;
  draw.seed = derive_seed(seed, static_cast<std::uint64_t>(rep));
  DetectionConfig local = config;
  local.seed = derive_seed(draw.seed, std::uint64_t{1});
  auto result = detect_multiple(generate(draw), local);

  RepOutcome out;
  out.flagged = !result.changepoints.empty();
  if (out.flagged && !planted.empty()) {
    double total = 0.0;
    for (auto truth : planted) {
      double best = INFINITY;
      for (const auto& cp : result.changepoints)
        best = std::min(best, std::abs(static_cast<double>(cp.t_original - truth)));
      total += best;
    }
    out.loc_error = total / static_cast<double>(planted.size());
  }
  return out;
}

}  // namespace

RateEstimate estimate_rates(const PlantedSpec& spec, const DetectionConfig& config,
                            std::size_t reps, std::uint64_t seed, std::size_t parallelism) {
  if (reps < 1) throw Error(Errc::invalid_argument, "reps must be at least 1");
  validate(spec);
  validate(config, spec.kind == ProfileKind::bernoulli ? SeriesKind::binary
                                                      : SeriesKind::continuous);
  const auto planted = spec.planted_changes();

  std::vector<RepOutcome> outcomes(reps);
  std::vector<std::exception_ptr> errors(reps);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t r = next++; r < reps; r = next++) {
      try {
        outcomes[r] = run_rep(spec, config, seed, r, planted);
      } catch (...) {
        errors[r] = std::current_exception();
      }
    }
  };
  const std::size_t threads = std::clamp<std::size_t>(parallelism, 1, reps);
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);

  RateEstimate est;
  est.reps = reps;
  double loc_sum = 0.0;
  std::size_t loc_count = 0;
  for (const auto& o : outcomes) {
    if (o.flagged) ++est.flagged;
    if (o.loc_error) {
      loc_sum += *o.loc_error;
      ++loc_count;
    }
  }
  est.flag_rate = static_cast<double>(est.flagged) / static_cast<double>(reps);
  est.mc_stderr = std::sqrt(est.flag_rate * (1.0 - est.flag_rate) / static_cast<double>(reps));
  if (loc_count > 0) est.localization_mae = loc_sum / static_cast<double>(loc_count);
  return est;
}

}  // namespace splitcp
