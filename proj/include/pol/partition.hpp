#pragma once

// Block partitions of a sequence into disjoint length-L windows that each
// contain every symbol of the alphabet.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "pol/interval.hpp"
#include "pol/seqspace.hpp"

namespace pol {

using Rational = boost::multiprecision::cpp_rational;
using Starts = std::vector<Position>;

/// Infinitely many greedy blocks. After `preperiod_blocks` blocks the starts
/// repeat with `cycle_blocks` blocks per `cycle_span` positions; every gap
/// from that point on is at most `eventual_gap`.
struct ProvenInfinite {
  Position eventual_gap = 0;
  std::size_t preperiod_blocks = 0;
  std::size_t cycle_blocks = 0;
  Position cycle_span = 0;
};

/// The greedy partition exists up until at most block k (k blocks in total).
struct ExistsUpToBlock {
  std::size_t k = 0;
};

/// Only a prefix of length `horizon` is known.
struct UndeterminedBeyondHorizon {
  Position horizon = 0;
};

using PartitionStatus = std::variant<ProvenInfinite, ExistsUpToBlock, UndeterminedBeyondHorizon>;

class GreedyPartition {
 public:
  int block_length = 0;
  /// First min(max_blocks, available) starts.
  Starts starts;
  PartitionStatus status;

  bool proven_infinite() const { return std::holds_alternative<ProvenInfinite>(status); }

  /// r_k (1-based) for every k when proven infinite; otherwise only for the
  /// blocks found. Throws OutOfHorizon for unavailable blocks.
  Position start(std::size_t k) const;

  /// Number of blocks found (finite status) or SIZE_MAX when infinite.
  std::size_t block_count() const;

 private:
  friend GreedyPartition greedy_partition(const Sequence&, int, std::size_t);
  Starts head_;
};

/// Greedy starts of blocks lying wholly inside w. Starts found here are
/// starts of the greedy partition of every extension of w.
Starts greedy_starts_in_word(std::span<const Symbol> w, int alphabet_size, int block_length,
                             std::size_t max_blocks = SIZE_MAX);

/// Whether w[r-1 .. r+L-2] contains every symbol 1..N.
bool window_covers(std::span<const Symbol> w, int alphabet_size, Position r, int block_length);

GreedyPartition greedy_partition(const Sequence& x, int block_length, std::size_t max_blocks);

/// Every increasing start list (including the empty one) whose blocks lie in
/// the prefix, are pairwise disjoint and each contain every symbol. Ordered
/// by number of blocks, then lexicographically.
std::vector<Starts> enumerate_valid_partitions(std::span<const Symbol> prefix, int alphabet_size,
                                               int block_length, std::size_t max_prefix = 20,
                                               int max_alphabet = 4);

struct BlockDecomposition {
  int block_length = 0;
  Starts starts;
  /// |S_k|, the number of entries between block k-1 and block k.
  std::vector<Position> gaps;
};

/// Validates that `starts` is an L-partition of x and returns its gap blocks.
BlockDecomposition decompose(const Sequence& x, std::span<const Position> starts, int block_length);

/// Smallest m such that every length-m window covers the alphabet, or
/// nullopt when no such m exists.
struct QuasiPeriodReport {
  std::optional<Position> quasi_period;
};

QuasiPeriodReport quasi_period(const Sequence& x);

/// Sum of 1/r_k over the first `count` starts, exactly.
Rational partial_sum(std::span<const Position> starts, std::size_t count);

/// Enclosure of the same sum in floating point.
Interval partial_sum_interval(std::span<const Position> starts, std::size_t count);

double to_double(const Rational& q);

}  // namespace pol
