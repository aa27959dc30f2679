#include "splitcp/error.hpp"

namespace splitcp {

std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::invalid_argument: return "invalid-argument";
    case Errc::empty_input: return "empty-input";
    case Errc::non_binary_value: return "non-binary-value";
    case Errc::too_short: return "too-short";
    case Errc::window_too_large: return "window-too-large";
    case Errc::negative_latent_variance: return "negative-latent-variance";
    case Errc::unstable_metric: return "unstable-metric";
    case Errc::too_few_players: return "too-few-players";
    case Errc::alpha_out_of_range: return "alpha-out-of-range";
    case Errc::value_out_of_bounds: return "value-out-of-bounds";
    case Errc::degenerate_table: return "degenerate-table";
    case Errc::empty_sample: return "empty-sample";
    case Errc::duplicate_entity: return "duplicate-entity";
    case Errc::invalid_spec: return "invalid-spec";
    case Errc::config_conflict: return "config-conflict";
    case Errc::missing_column: return "missing-column";
    case Errc::parse_error: return "parse-error";
    case Errc::empty_series: return "empty-series";
    case Errc::unknown_entity: return "unknown-entity";
    case Errc::io_error: return "io-error";
  }
  return "unknown";
}

}  // namespace splitcp
