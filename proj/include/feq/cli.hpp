#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "feq/group.hpp"

namespace feq {

enum class Command { kGenerate, kVerify, kIdentities, kClassify };

struct RunConfig {
  Command command = Command::kVerify;
  GroupSpec group;
  std::vector<std::int64_t> schedule{8, 16, 32, 64};
  double ratio_tol = 1.2;
  double epsilon = 1e-6;
  std::uint64_t seed = 0;
  std::int64_t radius = 0;  // 0 = per-command default
  std::string family;       // generate only
  std::string input;
  std::string params;
  std::string output;       // empty = stdout
  int random_count = 0;     // identities --random
};

/// Exit statuses.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitInvalid = 2;

/// Checks the config invariants; throws ParseError.
void validate_config(const RunConfig& config);

/// Executes one command. Reports go to config.output, or to `out` when no path
/// was given; diagnostics go to `err`.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Parses argv into a RunConfig and runs it.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace feq
