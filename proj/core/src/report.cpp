#include "splitcp/report.hpp"

#include <sstream>

#include <json.hpp>

#include "splitcp/csv.hpp"
#include "splitcp/error.hpp"

namespace splitcp::report {

using nlohmann::ordered_json;

namespace {

ordered_json config_json(const DetectionConfig& c) {
  ordered_json j;
  j["alpha"] = c.alpha;
  j["delta"] = c.delta;
  j["test"] = to_string(c.test);
  j["min_segment"] = c.min_segment;
  if (c.min_side) j["min_side"] = *c.min_side;
  else j["min_side"] = nullptr;
  j["n_perm"] = c.n_perm;
  j["seed"] = c.seed;
  j["use_split"] = c.use_split;
  j["correction"] = to_string(c.correction);
  j["exact_limit"] = c.exact_limit;
  return j;
}

ordered_json result_json(const DetectionResult& r) {
  ordered_json j;
  j["entity_id"] = r.entity_id;
  j["metric"] = r.metric;
  j["method"] = to_string(r.method);
  j["changepoints"] = ordered_json::array();
  for (const auto& cp : r.changepoints) {
    ordered_json c;
    c["t_original"] = cp.t_original;
    c["timestamp"] = cp.timestamp ? ordered_json(*cp.timestamp) : ordered_json(nullptr);
    c["p_value"] = cp.p_value;
    c["mean_before"] = cp.mean_before;
    c["mean_after"] = cp.mean_after;
    c["candidate_lambda"] = cp.candidate_lambda;
    j["changepoints"].push_back(std::move(c));
  }
  j["audit"] = ordered_json::array();
  for (const auto& a : r.audit) {
    ordered_json e;
    e["segment_start"] = a.segment_start;
    e["segment_end"] = a.segment_end;
    e["candidate"] = a.candidate ? ordered_json(*a.candidate) : ordered_json(nullptr);
    e["candidate_lambda"] = a.candidate_lambda;
    e["p_value"] = a.p_value ? ordered_json(*a.p_value) : ordered_json(nullptr);
    e["alpha_used"] = a.alpha_used;
    e["test_before_n"] = a.test_before_n;
    e["test_after_n"] = a.test_after_n;
    e["decision"] = to_string(a.decision);
    e["note"] = a.note;
    j["audit"].push_back(std::move(e));
  }
  j["config"] = config_json(r.config);
  return j;
}

ordered_json parse(std::string_view text, const char* what) {
  try {
    return ordered_json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::parse_error, std::string(what) + ": " + e.what());
  }
}

}  // namespace

std::string config_to_json(const DetectionConfig& config) { return config_json(config).dump(2); }

DetectionConfig config_from_json(std::string_view json_text, DetectionConfig base) {
  auto j = parse(json_text, "detection config");
  if (!j.is_object()) throw Error(Errc::parse_error, "detection config must be a JSON object");
  try {
    for (const auto& [key, v] : j.items()) {
      if (key == "alpha") base.alpha = v.get<double>();
      else if (key == "delta") base.delta = v.get<double>();
      else if (key == "test") base.test = parse_test_choice(v.get<std::string>());
      else if (key == "min_segment") base.min_segment = v.get<std::size_t>();
      else if (key == "min_side") {
        if (v.is_null()) base.min_side.reset();
        else base.min_side = v.get<std::size_t>();
      } else if (key == "n_perm") base.n_perm = v.get<std::int64_t>();
      else if (key == "seed") base.seed = v.get<std::uint64_t>();
      else if (key == "use_split") base.use_split = v.get<bool>();
      else if (key == "correction") base.correction = parse_correction(v.get<std::string>());
      else if (key == "exact_limit") base.exact_limit = v.get<std::int64_t>();
      else throw Error(Errc::parse_error, "detection config: unknown key '" + key + "'");
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::parse_error, std::string("detection config: ") + e.what());
  }
  return base;
}

std::string to_json(const DetectionResult& result, int indent) {
  return result_json(result).dump(indent);
}

std::string cohort_to_json(const CohortResult& cohort, int indent) {
  ordered_json j;
  j["players"] = cohort.players;
  j["flagged_players"] = cohort.flagged_players;
  j["total_changepoints"] = cohort.total_changepoints;
  j["results"] = ordered_json::array();
  for (const auto& [id, r] : cohort.results) j["results"].push_back(result_json(r));
  return j.dump(indent);
}

std::string detections_csv_header() {
  return "entity_id,metric,t_original,timestamp,p_value,mean_before,mean_after,candidate_lambda";
}

std::vector<std::string> to_csv_rows(const DetectionResult& result) {
  std::vector<std::string> rows;
  for (const auto& cp : result.changepoints) {
    std::ostringstream os;
    os << csv::escape(result.entity_id) << ',' << csv::escape(result.metric) << ','
       << cp.t_original << ',' << csv::escape(cp.timestamp.value_or("")) << ','
       << csv::format_number(cp.p_value) << ',' << csv::format_number(cp.mean_before) << ','
       << csv::format_number(cp.mean_after) << ',' << csv::format_number(cp.candidate_lambda);
    rows.push_back(os.str());
  }
  return rows;
}

PlantedSpec spec_from_json(std::string_view json_text) {
  auto j = parse(json_text, "planted spec");
  PlantedSpec spec;
  try {
    auto kind = j.at("kind").get<std::string>();
    if (kind == "bernoulli") spec.kind = ProfileKind::bernoulli;
    else if (kind == "gaussian") spec.kind = ProfileKind::gaussian;
    else throw Error(Errc::invalid_spec, "unknown kind '" + kind + "'");
    for (const auto& s : j.at("segments")) {
      PlantedSegment seg;
      seg.length = s.at("length").get<std::size_t>();
      if (spec.kind == ProfileKind::bernoulli) {
        seg.p = s.at("p").get<double>();
      } else {
        seg.mu = s.at("mu").get<double>();
        seg.sigma = s.at("sigma").get<double>();
      }
      spec.segments.push_back(seg);
    }
    if (j.contains("seed")) spec.seed = j.at("seed").get<std::uint64_t>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::invalid_spec, e.what());
  }
  validate(spec);
  return spec;
}

std::string spec_to_json(const PlantedSpec& spec) {
  ordered_json j;
  j["kind"] = spec.kind == ProfileKind::bernoulli ? "bernoulli" : "gaussian";
  j["segments"] = ordered_json::array();
  for (const auto& s : spec.segments) {
    ordered_json seg;
    seg["length"] = s.length;
    if (spec.kind == ProfileKind::bernoulli) {
      seg["p"] = s.p;
    } else {
      seg["mu"] = s.mu;
      seg["sigma"] = s.sigma;
    }
    j["segments"].push_back(std::move(seg));
  }
  j["seed"] = spec.seed;
  return j.dump();
}

std::string rate_csv_header() {
  return "name,kind,n,changes,alpha,delta,use_split,test,reps,flagged,flag_rate,mc_stderr,"
         "localization_mae";
}

std::string to_csv_row(std::string_view name, const PlantedSpec& spec,
                       const DetectionConfig& config, const RateEstimate& est) {
  std::ostringstream os;
  os << csv::escape(name) << ',' << (spec.kind == ProfileKind::bernoulli ? "bernoulli" : "gaussian")
     << ',' << spec.n() << ',' << spec.planted_changes().size() << ','
     << csv::format_number(config.alpha) << ',' << csv::format_number(config.delta) << ','
     << (config.use_split ? "true" : "false") << ',' << to_string(config.test) << ',' << est.reps
     << ',' << est.flagged << ',' << csv::format_number(est.flag_rate) << ','
     << csv::format_number(est.mc_stderr) << ','
     << (est.localization_mae ? csv::format_number(*est.localization_mae) : "NA");
  return os.str();
}

std::string interval_csv_header() { return "entity_id,metric,t,mean,lower,upper,half_width"; }

std::string to_csv_row(std::string_view entity_id, std::string_view metric,
                       const ConfidenceInterval& ci) {
  std::ostringstream os;
  os << csv::escape(entity_id) << ',' << csv::escape(metric) << ',' << ci.t << ','
     << csv::format_number(ci.center) << ',' << csv::format_number(ci.lower) << ','
     << csv::format_number(ci.upper) << ',' << csv::format_number(ci.half_width);
  return os.str();
}

}  // namespace splitcp::report
