#pragma once

#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "splitcp/detect.hpp"
#include "splitcp/simgen.hpp"
#include "splitcp/stabilization.hpp"

namespace splitcp::report {

// JSON text with a fixed key order and number formatting, so identical
// inputs give identical bytes.
std::string config_to_json(const DetectionConfig& config);

// Applies the keys present in `json_text` on top of `base`. Keys mirror the
// DetectionConfig field names.
DetectionConfig config_from_json(std::string_view json_text, DetectionConfig base = {});

// {"entity_id", "metric", "method", "changepoints": [...], "audit": [...],
//  "config": {...}}
std::string to_json(const DetectionResult& result, int indent = 2);

// {"players", "flagged_players", "total_changepoints", "results": [...]}
// with results ordered by entity_id.
std::string cohort_to_json(const CohortResult& cohort, int indent = 2);

// entity_id,metric,t_original,timestamp,p_value,mean_before,mean_after,candidate_lambda
std::string detections_csv_header();
std::vector<std::string> to_csv_rows(const DetectionResult& result);

// A planted spec from {"kind": "bernoulli"|"gaussian", "segments": [...],
// "seed": n}. Segments carry "length" plus "p" or "mu"/"sigma".
PlantedSpec spec_from_json(std::string_view json_text);
std::string spec_to_json(const PlantedSpec& spec);

// name,kind,n,changes,alpha,delta,use_split,test,reps,flagged,flag_rate,mc_stderr,localization_mae
std::string rate_csv_header();
std::string to_csv_row(std::string_view name, const PlantedSpec& spec,
                       const DetectionConfig& config, const RateEstimate& estimate);

std::string interval_csv_header();  // entity_id,metric,t,mean,lower,upper,half_width
std::string to_csv_row(std::string_view entity_id, std::string_view metric,
                       const ConfidenceInterval& ci);

}  // namespace splitcp::report
