#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include "pol/cli.hpp"

int main(int argc, char** argv) {
  std::optional<std::uint64_t> seed;
  if (const char* env = std::getenv("POL_SEED"); env && *env) {
    try {
      seed = std::stoull(env);
    } catch (const std::exception&) {
      std::cerr << "error: POL_SEED must be an unsigned integer\n";
      return pol::cli::kUsage;
    }
  }
  return pol::cli::run(argc, argv, std::cout, std::cerr, seed);
}
