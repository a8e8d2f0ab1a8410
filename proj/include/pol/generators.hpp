#pragma once

// Order sequences from each class of interest, for experiments and tests.
// Every random choice comes from SplitMix64 so outputs are reproducible
// from the seed alone.

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "pol/classify.hpp"
#include "pol/seqspace.hpp"

namespace pol {

struct PeriodicSpec {
  Word pattern;
};

/// A random period in which every window of length m covers the alphabet.
struct QuasiPeriodicSpec {
  Position m = 0;
  std::uint64_t seed = 0;
};

struct IidUniformSpec {
  std::uint64_t seed = 0;
  Position length = 0;
};

/// Run k (from 0) repeats symbol (k mod N) + 1; its length is
/// ceil(base^k) for exponential growth or round(offset + slope k) for linear.
struct RunGrowth {
  enum class Kind { Exponential, Linear };
  Kind kind = Kind::Exponential;
  double base = 2.0;
  double offset = 1.0;
  double slope = 1.0;

  Position run_length(std::size_t k) const;
};

struct AdversarialRunsSpec {
  RunGrowth growth;
  Position length = 0;
};

/// Blocks of length L covering the alphabet, separated by gaps whose
/// cumulative length stays within the bound.
struct PcBoundedSpec {
  int L = 0;
  BoundFunction bound = BoundFunction::linear(1.0);
  std::uint64_t seed = 0;
  Position length = 0;
};

using GeneratorSpec =
    std::variant<PeriodicSpec, QuasiPeriodicSpec, IidUniformSpec, AdversarialRunsSpec, PcBoundedSpec>;

std::string generator_name(const GeneratorSpec& spec);

Sequence generate(const GeneratorSpec& spec, Alphabet alphabet);

/// The spec with its seed replaced, for specs that have one.
GeneratorSpec with_seed(GeneratorSpec spec, std::uint64_t seed);

/// Seed of trial i, derived from the family seed.
std::uint64_t trial_seed(std::uint64_t family_seed, std::size_t trial);

struct RateOptions {
  std::size_t trials = 100;
  Position horizon = 10'000;
  int L = 0;
  std::int64_t M = 10;
  std::uint64_t seed = 0;
  unsigned jobs = 1;
};

struct TrialOutcome {
  bool bounded_density = false;
  bool excluded_from_A = false;
  double mean_late_gap = 0.0;
  std::size_t late_blocks = 0;
};

/// Bounded density: greedy blocks start in the second half of the horizon
/// and their gap blocks average at most 2L.
TrialOutcome evaluate_trial(const Sequence& x, Position horizon, int L, std::int64_t M);

struct RateRow {
  std::string spec_id;
  std::size_t trials = 0;
  double bounded_density_rate = 0.0;
  double excluded_from_A_rate = 0.0;
  double mean_late_gap = 0.0;
};

RateRow empirical_class_rates(const std::string& spec_id, const GeneratorSpec& family,
                              Alphabet alphabet, const RateOptions& options);

}  // namespace pol
