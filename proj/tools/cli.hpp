// Command-line front end. Exit codes: 0 success, 1 planning or validation
// failure, 2 input error.
#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace vtt::cli {

inline constexpr int kOk = 0;
inline constexpr int kFailure = 1;
inline constexpr int kInputError = 2;

// Environment variable naming a default config file. Precedence, lowest
// first: built-in defaults, this file, the scene's config, --config-override.
inline constexpr const char* kConfigEnv = "VTT_CONFIG";

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace vtt::cli
