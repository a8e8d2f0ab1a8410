#include "pol/seqspace.hpp"

#include <cmath>
#include <numeric>
#include <string>

namespace pol {

Alphabet::Alphabet(int size) : size_(size) {
  if (size < 1) throw Error(ErrorCode::InvalidSymbol, "alphabet size must be positive");
}

void validate_word(Alphabet alphabet, std::span<const Symbol> w) {
  for (Symbol s : w) {
    if (!alphabet.contains(s)) {
      throw Error(ErrorCode::InvalidSymbol, "symbol " + std::to_string(s) + " outside 1.." +
                                                std::to_string(alphabet.size()));
    }
  }
}

Sequence Sequence::eventually_periodic(Alphabet alphabet, Word transient, Word period) {
  if (period.empty()) throw Error(ErrorCode::InvalidSymbol, "period must be nonempty");
  validate_word(alphabet, transient);
  validate_word(alphabet, period);
  return Sequence(alphabet, EventuallyPeriodic{std::move(transient), std::move(period)});
}

Sequence Sequence::periodic(Alphabet alphabet, Word period) {
  return eventually_periodic(alphabet, {}, std::move(period));
}

Sequence Sequence::prefix(Alphabet alphabet, Word prefix) {
  validate_word(alphabet, prefix);
  return Sequence(alphabet, FinitePrefix{std::move(prefix)});
}

std::optional<Position> Sequence::horizon() const noexcept {
  if (const auto* p = std::get_if<FinitePrefix>(&model_)) {
    return static_cast<Position>(p->prefix.size());
  }
  return std::nullopt;
}

const EventuallyPeriodic& Sequence::periodic_model() const {
  if (const auto* m = std::get_if<EventuallyPeriodic>(&model_)) return *m;
  throw Error(ErrorCode::UndecidableAtHorizon, "sequence is only known through a finite prefix");
}

const Word& Sequence::prefix_word() const {
  if (const auto* p = std::get_if<FinitePrefix>(&model_)) return p->prefix;
  throw Error(ErrorCode::InvalidSymbol, "sequence is not a finite prefix");
}

Symbol Sequence::at(Position n) const {
  if (n < 1) throw Error(ErrorCode::OutOfHorizon, "positions start at 1");
  if (const auto* m = std::get_if<EventuallyPeriodic>(&model_)) {
    const auto t = static_cast<Position>(m->transient.size());
    if (n <= t) return m->transient[static_cast<std::size_t>(n - 1)];
    const auto p = static_cast<Position>(m->period.size());
    return m->period[static_cast<std::size_t>((n - t - 1) % p)];
  }
  const auto& w = std::get<FinitePrefix>(model_).prefix;
  if (n > static_cast<Position>(w.size())) {
    throw Error(ErrorCode::OutOfHorizon,
                "position " + std::to_string(n) + " beyond prefix of length " +
                    std::to_string(w.size()));
  }
  return w[static_cast<std::size_t>(n - 1)];
}

Word Sequence::take(Position len) const {
  Word out;
  out.reserve(static_cast<std::size_t>(std::max<Position>(len, 0)));
  for (Position n = 1; n <= len; ++n) out.push_back(at(n));
  return out;
}

double DyadicRadius::value() const { return std::ldexp(1.0, -static_cast<int>(exponent)); }

DyadicRadius DistanceBracket::upper() const {
  if (exact) return *exact;
  return DyadicRadius{static_cast<std::uint32_t>(horizon + 1)};
}

namespace {

void require_same_alphabet(const Sequence& x, const Sequence& y) {
  if (x.alphabet() != y.alphabet()) {
    throw Error(ErrorCode::AlphabetMismatch, "sequences over alphabets of size " +
                                                 std::to_string(x.alphabet().size()) + " and " +
                                                 std::to_string(y.alphabet().size()));
  }
}

}  // namespace

std::optional<DyadicRadius> distance(const Sequence& x, const Sequence& y) {
  require_same_alphabet(x, y);
  const auto& mx = x.periodic_model();
  const auto& my = y.periodic_model();
  // Past both transients the pair (x_n, y_n) repeats with period lcm(px, py).
  const auto px = static_cast<Position>(mx.period.size());
  const auto py = static_cast<Position>(my.period.size());
  const Position span = static_cast<Position>(std::max(mx.transient.size(), my.transient.size())) +
                        std::lcm(px, py);
  for (Position n = 1; n <= span; ++n) {
    if (x.at(n) != y.at(n)) return DyadicRadius{static_cast<std::uint32_t>(n)};
  }
  return std::nullopt;
}

DistanceBracket distance_bounded(const Sequence& x, const Sequence& y, Position horizon) {
  require_same_alphabet(x, y);
  for (Position n = 1; n <= horizon; ++n) {
    if (x.at(n) != y.at(n)) return {DyadicRadius{static_cast<std::uint32_t>(n)}, horizon};
  }
  return {std::nullopt, horizon};
}

bool in_ball(const Sequence& center, DyadicRadius r, const Sequence& y) {
  require_same_alphabet(center, y);
  const Position j = forced_prefix_length(r);
  for (Position n = 1; n <= j; ++n) {
    if (center.at(n) != y.at(n)) return false;
  }
  return true;
}

std::optional<std::uint64_t> word_count(int alphabet_size, std::size_t len, std::uint64_t cap) {
  std::uint64_t count = 1;
  for (std::size_t i = 0; i < len; ++i) {
    if (count > cap / static_cast<std::uint64_t>(alphabet_size)) return std::nullopt;
    count *= static_cast<std::uint64_t>(alphabet_size);
  }
  if (count > cap) return std::nullopt;
  return count;
}

std::vector<Word> enumerate_ball_prefixes(const Sequence& center, DyadicRadius r, int extra,
                                          std::uint64_t cap) {
  if (extra < 0) throw Error(ErrorCode::DomainError, "extra must be nonnegative");
  const int n = center.alphabet().size();
  if (!word_count(n, static_cast<std::size_t>(extra), cap)) {
    throw Error(ErrorCode::CapExceeded, std::to_string(n) + "^" + std::to_string(extra) +
                                            " ball prefixes exceed cap " + std::to_string(cap));
  }
  const Word forced = center.take(forced_prefix_length(r));
  std::vector<Word> out;
  for_each_word(n, static_cast<std::size_t>(extra), [&](const Word& tail) {
    Word w = forced;
    w.insert(w.end(), tail.begin(), tail.end());
    out.push_back(std::move(w));
  });
  return out;
}

}  // namespace pol
