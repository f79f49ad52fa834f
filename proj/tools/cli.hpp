#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace colloq::cli {

/// Exit codes shared by every subcommand.
inline constexpr int kExitPass = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

/// Environment variable naming the directory for relative output paths.
inline constexpr const char* kOutputDirEnv = "COLLOQ_OUTPUT_DIR";

/// Runs one invocation. args excludes the program name. Everything the
/// command prints goes to out/err, so callers can capture it.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace colloq::cli
