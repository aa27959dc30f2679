#pragma once

#include <ostream>
#include <span>
#include <string>

namespace splitcp::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitIo = 2;

// Environment variable naming a JSON file of DetectionConfig defaults.
inline constexpr const char* kConfigEnvVar = "SPLITCP_CONFIG";

// argv[0] excluded. Returns the process exit code.
int run(std::span<const std::string> args, std::ostream& out, std::ostream& err);

}  // namespace splitcp::cli
