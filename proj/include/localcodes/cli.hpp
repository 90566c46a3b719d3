#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace localcodes::cli {

/// Exit codes returned by dispatch.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;     // data, config or generation error
inline constexpr int kExitRuntime = 3;  // training or fit error

/// Environment variable naming the default output directory.
inline constexpr const char* kResultsDirEnv = "LOCALCODES_RESULTS_DIR";

/// Runs the command line `args` (args[0] is the program name).
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace localcodes::cli
