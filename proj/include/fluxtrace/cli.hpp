#ifndef FLUXTRACE_CLI_HPP
#define FLUXTRACE_CLI_HPP

#include <iosfwd>
#include <string_view>

namespace fluxtrace::cli {

inline constexpr std::string_view kToolName = "fluxtrace";
inline constexpr std::string_view kVersion = "0.1.0";

enum ExitCode : int {
  kOk = 0,
  kUsageOrParse = 1,
  kIo = 2,
  kCausality = 3,
};

/// Entry point of the `fluxtrace` tool with subcommands `simulate`, `flux`
/// and `replay`. Messages go to `err`, help text to `out`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace fluxtrace::cli

#endif  // FLUXTRACE_CLI_HPP
