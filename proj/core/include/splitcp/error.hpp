#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace splitcp {

enum class Errc {
  invalid_argument,
  empty_input,
  non_binary_value,
  too_short,
  window_too_large,
  negative_latent_variance,
  unstable_metric,
  too_few_players,
  alpha_out_of_range,
  value_out_of_bounds,
  degenerate_table,
  empty_sample,
  duplicate_entity,
  invalid_spec,
  config_conflict,
  missing_column,
  parse_error,
  empty_series,
  unknown_entity,
  io_error,
};

std::string_view to_string(Errc code) noexcept;

// All library failures surface as this type; `code()` is stable, `what()` is
// human-readable.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message),
        code_(code) {}

  [[nodiscard]] Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace splitcp
