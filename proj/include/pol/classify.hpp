#pragma once

// Membership in quasi-normal sequences and in the exceptional sets built
// from greedy partitions.
//
// Exact verdicts are produced only for eventually periodic inputs. For a
// finite prefix the answer is either a one-sided exclusion (every extension
// of the prefix lies outside the set) or UndeterminedAtHorizon.

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "pol/interval.hpp"
#include "pol/partition.hpp"
#include "pol/seqspace.hpp"

namespace pol {

/// An increasing bound p(k) on cumulative gap lengths.
class BoundFunction {
 public:
  using Evaluator = std::function<double(Position)>;

  static BoundFunction linear(double c);
  static BoundFunction constant(double c);
  static BoundFunction affine(double a, double b);
  static BoundFunction power(double c, double base);
  /// `lower_slope`, if given, promises p(k) >= lower_slope * k for k >= 1.
  static BoundFunction custom(std::string name, Evaluator fn,
                              std::optional<double> lower_slope = std::nullopt);

  double operator()(Position k) const { return fn_(k); }

  const std::string& kind() const { return kind_; }
  const std::vector<double>& params() const { return params_; }
  std::optional<double> linear_lower_slope() const { return lower_slope_; }

  /// Values of k in 1..upto-1 with p(k) > p(k+1).
  std::vector<Position> monotonicity_violations(Position upto) const;

 private:
  BoundFunction(std::string kind, std::vector<double> params, Evaluator fn,
                std::optional<double> slope)
      : kind_(std::move(kind)), params_(std::move(params)), fn_(std::move(fn)),
        lower_slope_(slope) {}

  std::string kind_;
  std::vector<double> params_;
  Evaluator fn_;
  std::optional<double> lower_slope_;
};

/// A family f^L_r of positive weights. The evaluator sees the block length
/// and the starts r_1..r_k and returns f^L_r(r_k); it must not look past r_k,
/// which is what makes prefix certificates about weighted sums checkable.
class WeightFamily {
 public:
  using Evaluator = std::function<double(int, std::span<const Position>)>;

  static WeightFamily unit();       // f = 1
  static WeightFamily block_index();  // f(r_k) = k
  static WeightFamily log_index();  // f(r_k) = 1 + log k
  static WeightFamily log_start();  // f(r_k) = 1 + log r_k
  static WeightFamily custom(std::string name, Evaluator fn);

  double operator()(int block_length, std::span<const Position> starts_through_k) const {
    return fn_(block_length, starts_through_k);
  }

  const std::string& kind() const { return kind_; }

  /// Sampled check of monotonicity in the partition order: for random pairs
  /// of L-partitions r, s and every k with r_k <= s_k, f_r(r_k) <= f_s(s_k).
  /// Returns the number of violating (pair, k) samples.
  std::size_t monotonicity_violations(int block_length, int pairs, std::uint64_t seed) const;

 private:
  WeightFamily(std::string kind, Evaluator fn) : kind_(std::move(kind)), fn_(std::move(fn)) {}

  std::string kind_;
  Evaluator fn_;
};

// Set descriptors.
struct SetA {  // greedy L-partition exists and sum 1/r_k < (1/L) log M
  int L = 0;
  std::int64_t M = 1;
};
struct SetB {  // greedy L-partition exists up until at most block k
  int L = 0;
  std::size_t k = 0;
};
struct SetF {  // symbol n occurs fewer than M times
  Symbol n = 1;
  std::int64_t M = 0;
};
struct SetNLc {  // some representation keeps cumulative gaps under p
  int L = 0;
  BoundFunction bound;
};
struct SetWeightedA {  // greedy L-partition exists and sum 1/(r_k f(r_k)) < M
  int L = 0;
  double M = 1.0;
  WeightFamily weights;
};

using SetDescriptor = std::variant<SetA, SetB, SetF, SetNLc, SetWeightedA>;

void validate_set(const SetDescriptor& set, Alphabet alphabet);
std::string set_name(const SetDescriptor& set);

enum class Verdict { Member, NonMember, ExcludedByPrefix, UndeterminedAtHorizon };

std::string_view to_string(Verdict v);

struct Certificate {
  std::optional<int> L;
  Starts starts;
  std::optional<Interval> partial_sum;
  std::optional<Interval> threshold;
  std::optional<Position> eventual_gap;
  std::optional<Symbol> missing;
  std::optional<std::size_t> violated_at;  // block index where a bound fails
  std::string reason;
};

struct ClassificationReport {
  Verdict verdict = Verdict::UndeterminedAtHorizon;
  Certificate certificate;
};

struct ClassifyOptions {
  /// Terms summed when cross-checking divergence against a threshold.
  std::size_t cross_check_terms = 20'000;
  /// Blocks checked directly before relying on cycle arguments.
  std::size_t search_cap = 100'000;
  /// Terms allowed when summing weighted reciprocals.
  std::size_t iteration_cap = 10'000'000;
};

/// Member iff every symbol occurs in the period.
ClassificationReport is_quasi_normal(const Sequence& x);

struct QuasiNormalDiagnostics {
  int L = 0;
  Starts starts;
  std::vector<Interval> partial_sums;  // after 1, 2, ... blocks
  /// Exact total over `starts`; only kept for short lists, since the
  /// denominators grow with every term.
  std::optional<Rational> sum;
  std::vector<Position> gap_sums;      // sum_{i<=k} |S_i|
};

inline constexpr std::size_t kExactSumLimit = 512;

/// Greedy blocks of a prefix and their reciprocal partial sums. Reports
/// growth only; never concludes divergence.
QuasiNormalDiagnostics quasi_normal_diagnostics(const Sequence& prefix, int L,
                                                std::size_t count = SIZE_MAX);

/// (1/L) log M as an enclosure.
Interval a_threshold(int L, std::int64_t M);

ClassificationReport membership(const Sequence& x, const SetDescriptor& set,
                                const ClassifyOptions& options = {});

/// ExcludedByPrefix when the greedy blocks inside the prefix already reach
/// the threshold of A{L,M}; otherwise UndeterminedAtHorizon.
ClassificationReport excluded_from_A(const Sequence& prefix, int L, std::int64_t M);

/// Existence of a representation S_1 R_1 S_2 R_2 ... with |R_k| = L, each R_k
/// covering the alphabet, and sum_{i<=k} |S_i| <= p(k) for all k.
ClassificationReport satisfies_P_Lc(const Sequence& x, int L, const BoundFunction& bound,
                                    std::size_t search_cap = 100'000);

/// Exhaustive search over every representation whose blocks lie inside w,
/// followed by a block that may start no earlier than max(|w|-L+2, end of
/// the last block + 1). Independent of the greedy construction.
struct RepresentationSearch {
  bool feasible = false;
  Starts blocks;  // one feasible choice of blocks inside w, if any
  std::uint64_t states_visited = 0;
};

RepresentationSearch search_representations(std::span<const Symbol> w, int alphabet_size, int L,
                                            const BoundFunction& bound);

/// Sum of 1/(r_k f(r_k)) over the first `count` starts.
Interval weighted_partial_sum(std::span<const Position> starts, int L, const WeightFamily& weights,
                              std::size_t count);

/// Level boundaries k_1 = 1 < k_2 < ... with sum_{k_l <= k < k_{l+1}} 1/r_k >= l,
/// and the step weight f(r_k) = l on each level.
struct DivergenceCertificate {
  std::vector<std::size_t> level_starts;  // k_1, ..., k_{levels+1}
  std::vector<Interval> level_sums;       // sum of 1/r_k over each level
  std::vector<Interval> weighted_level_sums;  // sum of 1/(r_k l) over each level

  /// f(r_k) for block k (1-based), defined for k < level_starts.back().
  std::size_t weight(std::size_t k) const;
};

DivergenceCertificate build_divergence_certificate(const std::function<Position(std::size_t)>& starts,
                                                   std::size_t target_levels,
                                                   std::size_t iteration_cap = 50'000'000);

}  // namespace pol
