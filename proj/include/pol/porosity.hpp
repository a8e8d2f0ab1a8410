#pragma once

// The porosity gauge phi, with phi^{-1}(t) = t^{1/t}, and witnesses of
// porosity: for a base prefix and a radius eps, a sequence y within eps of
// the base together with a smaller ball around y that misses a given set.
// Each witness carries an argument that verify_certificate can replay.

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "pol/classify.hpp"
#include "pol/seqspace.hpp"

namespace pol {

/// t^{1/t} for t in (0, 1].
double phi_inverse(double t);
/// log(t^{1/t}) = log(t)/t; finite where phi_inverse underflows to 0.
double phi_inverse_log(double t);

/// The t in (0, 1) with t^{1/t} = s, by bisection.
double phi(double s);
/// phi evaluated at s = exp(log_s), for arguments too small for a double.
double phi_of_log(double log_s);

/// Every ball member shares the forced prefix of y (length = radius exponent).
struct PrefixForcedArgument {
  Position forced_len = 0;
  std::string reason;
};

/// Every length-(forced + extra) extension pattern was checked.
struct EnumeratedArgument {
  std::uint64_t count = 0;
};

using WitnessArgument = std::variant<PrefixForcedArgument, EnumeratedArgument>;

struct WitnessCertificate {
  SetDescriptor set;
  Alphabet alphabet;
  Word base_prefix;       // x_1..x_j
  DyadicRadius epsilon;   // 2^{-j}
  Sequence witness;       // y
  DyadicRadius radius;    // the ball B(y, radius) misses the set
  WitnessArgument argument;
};

/// Smallest e with 2^{-e} < min{1/(8M), 2^{-3N-1}}.
std::uint32_t witness_A_min_exponent(int alphabet_size, std::int64_t M);
/// Exponent m = e * 2^e of the exclusion radius, so 2^{-m} = phi^{-1}(2^{-e}).
Position witness_A_radius_exponent(std::uint32_t epsilon_exp);

WitnessCertificate witness_A(const Sequence& x, std::int64_t M, DyadicRadius epsilon);
WitnessCertificate witness_B(const Sequence& x, std::size_t k, DyadicRadius epsilon);
WitnessCertificate witness_F(const Sequence& x, Symbol n, std::int64_t M, DyadicRadius epsilon);
/// Here the prefix length n is the epsilon exponent: y agrees with x on 1..n.
WitnessCertificate witness_NLc(const Sequence& x, int L, const BoundFunction& bound, Position n);
WitnessCertificate witness_A_weighted(const Sequence& x, double M, const WeightFamily& weights,
                                      DyadicRadius epsilon, std::size_t iteration_cap = 10'000'000);

/// m in the escape construction: p(L*floor(n/L) + 1) + 2L + 2.
Position nlc_gap_length(int L, const BoundFunction& bound, Position n);

/// Smallest horizon m such that the weighted reciprocal sum over greedy
/// blocks of y ending before m exceeds M.
Position weighted_horizon(const Sequence& y, int L, double M, const WeightFamily& weights,
                          std::size_t iteration_cap = 10'000'000);

struct PrefixForcedMode {};
struct EnumerateMode {
  int extra = 2;
};
using VerifyMode = std::variant<PrefixForcedMode, EnumerateMode>;

struct VerificationCheck {
  std::string name;
  bool passed = false;
  bool informational = false;  // reported but not required
  std::string detail;
};

struct VerificationReport {
  bool passed = false;
  std::vector<VerificationCheck> checks;
  std::optional<Word> counterexample;      // a ball prefix not excluded
  std::optional<std::string> escape_note;  // concrete extension found in the set, if any
  std::uint64_t enumerated = 0;
};

VerificationReport verify_certificate(const WitnessCertificate& cert, const VerifyMode& mode,
                                      std::uint64_t enumeration_cap = 1'000'000);

}  // namespace pol
