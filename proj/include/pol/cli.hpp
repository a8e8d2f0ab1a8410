#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

namespace pol::cli {

enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kInput = 2,
  kVerificationFailed = 3,
  kCapExceeded = 4,
};

/// Caps read from --config; every field has a default.
struct Config {
  std::uint64_t enumeration_cap = 1'000'000;
  std::size_t cross_check_terms = 20'000;
  std::size_t search_cap = 100'000;
  std::size_t iteration_cap = 10'000'000;
  long max_dimension = 64;
  std::size_t max_iters = 100'000;
  std::size_t log_stride = 1;
};

Config load_config(const std::string& path);

/// Runs one subcommand. `seed_override` replaces spec seeds when set
/// (the binary passes POL_SEED here).
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err,
        std::optional<std::uint64_t> seed_override = std::nullopt);

}  // namespace pol::cli
