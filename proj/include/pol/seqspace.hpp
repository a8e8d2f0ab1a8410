#pragma once

// Sequence space K = {1..N}^N with the dyadic first-disagreement metric.
//
// Positions are 1-based throughout. A sequence is either known exactly
// (a finite transient followed by a repeated period) or only through a
// finite prefix; the latter never answers questions about its tail.

#include <cstdint>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "pol/error.hpp"

namespace pol {

using Symbol = int;
using Word = std::vector<Symbol>;
using Position = std::int64_t;

class Alphabet {
 public:
  explicit Alphabet(int size);

  int size() const noexcept { return size_; }
  bool contains(Symbol s) const noexcept { return s >= 1 && s <= size_; }

  friend bool operator==(Alphabet, Alphabet) = default;

 private:
  int size_;
};

struct EventuallyPeriodic {
  Word transient;
  Word period;
};

struct FinitePrefix {
  Word prefix;
};

class Sequence {
 public:
  using Model = std::variant<EventuallyPeriodic, FinitePrefix>;

  static Sequence eventually_periodic(Alphabet alphabet, Word transient, Word period);
  static Sequence periodic(Alphabet alphabet, Word period);
  static Sequence prefix(Alphabet alphabet, Word prefix);

  Alphabet alphabet() const noexcept { return alphabet_; }
  const Model& model() const noexcept { return model_; }

  /// True for the eventually periodic model, where every entry is determined.
  bool is_exact() const noexcept { return std::holds_alternative<EventuallyPeriodic>(model_); }

  /// Number of known entries; nullopt when the sequence is known everywhere.
  std::optional<Position> horizon() const noexcept;

  const EventuallyPeriodic& periodic_model() const;
  const Word& prefix_word() const;

  /// x_n. Throws OutOfHorizon past the end of a finite prefix.
  Symbol at(Position n) const;

  /// (x_1, ..., x_len).
  Word take(Position len) const;

 private:
  Sequence(Alphabet alphabet, Model model) : alphabet_(alphabet), model_(std::move(model)) {}

  Alphabet alphabet_;
  Model model_;
};

inline Symbol entry(const Sequence& x, Position n) { return x.at(n); }

/// The value 2^{-exponent}, held exactly.
struct DyadicRadius {
  std::uint32_t exponent = 0;

  double value() const;
  friend auto operator<=>(DyadicRadius, DyadicRadius) = default;
};

/// Exact distance of two eventually periodic sequences; nullopt means the
/// sequences are equal (distance zero).
std::optional<DyadicRadius> distance(const Sequence& x, const Sequence& y);

/// Distance known only from the first `horizon` entries: either the first
/// disagreement is found (exact), or 0 <= d <= 2^{-(horizon+1)}.
struct DistanceBracket {
  std::optional<DyadicRadius> exact;
  Position horizon = 0;

  DyadicRadius upper() const;
};

DistanceBracket distance_bounded(const Sequence& x, const Sequence& y, Position horizon);

/// B(x, 2^{-j}) is exactly the set of sequences agreeing with x on 1..j.
inline Position forced_prefix_length(DyadicRadius r) { return r.exponent; }

/// Whether y lies in the open ball B(center, r), decided from the first
/// forced_prefix_length(r) entries of both sequences.
bool in_ball(const Sequence& center, DyadicRadius r, const Sequence& y);

/// All length-(j + extra) prefixes of members of B(center, 2^{-j}), in
/// lexicographic order of the free suffix.
std::vector<Word> enumerate_ball_prefixes(const Sequence& center, DyadicRadius r, int extra,
                                          std::uint64_t cap = 1'000'000);

/// Calls visit(word) for every word of length len over the alphabet, in
/// lexicographic order. Used by the enumeration oracles.
template <class Visit>
void for_each_word(int alphabet_size, std::size_t len, Visit&& visit) {
  Word w(len, 1);
  while (true) {
    visit(static_cast<const Word&>(w));
    std::size_t i = len;
    while (i > 0 && w[i - 1] == alphabet_size) {
      w[i - 1] = 1;
      --i;
    }
    if (i == 0) return;
    ++w[i - 1];
  }
}

/// N^len, or nullopt if it exceeds cap.
std::optional<std::uint64_t> word_count(int alphabet_size, std::size_t len, std::uint64_t cap);

void validate_word(Alphabet alphabet, std::span<const Symbol> w);

}  // namespace pol
