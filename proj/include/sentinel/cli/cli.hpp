#pragma once

#include "sentinel/harness/config.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace sentinel::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitPartial = 3;

struct CommandInvocation {
    std::string subcommand;  // ingest | preprocess | train | intervals | detect | inject | evaluate
    std::filesystem::path config;
    std::vector<harness::Override> overrides;  // applied in order; shorthands last
    int verbosity = 1;                         // 0 quiet, 1 info, 2 debug
    bool help = false;                         // help text was printed
};

/// Throws UsageError with a message listing valid flags.
CommandInvocation parse_args(int argc, const char* const* argv);

/// Runs the subcommand and returns its exit code. Throws on errors.
int dispatch(const CommandInvocation& invocation);

/// parse_args + dispatch with errors mapped to exit codes and reported on
/// standard error.
int run(int argc, const char* const* argv);

}  // namespace sentinel::cli
