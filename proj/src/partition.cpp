#include "pol/partition.hpp"

#include <algorithm>
#include <functional>
#include <string>

namespace pol {

namespace {

void require_block_length(int alphabet_size, int block_length) {
  if (block_length < alphabet_size) {
    throw Error(ErrorCode::LTooSmall, "block length " + std::to_string(block_length) +
                                          " is smaller than the alphabet size " +
                                          std::to_string(alphabet_size));
  }
}

// cover[r] for r = 1..count, where cover[r] says whether the window of
// length L starting at r contains every symbol. `symbol_at` is 1-based and
// must be defined on 1..count+L-1.
template <class SymbolAt>
std::vector<char> cover_table(SymbolAt&& symbol_at, int alphabet_size, int block_length,
                              Position count) {
  std::vector<char> cover(static_cast<std::size_t>(std::max<Position>(count, 0)) + 1, 0);
  if (count <= 0) return cover;
  std::vector<int> seen(static_cast<std::size_t>(alphabet_size) + 1, 0);
  int distinct = 0;
  auto add = [&](Symbol s) { distinct += (seen[static_cast<std::size_t>(s)]++ == 0); };
  auto remove = [&](Symbol s) { distinct -= (--seen[static_cast<std::size_t>(s)] == 0); };
  for (Position n = 1; n <= block_length; ++n) add(symbol_at(n));
  for (Position r = 1; r <= count; ++r) {
    cover[static_cast<std::size_t>(r)] = distinct == alphabet_size;
    if (r == count) break;
    remove(symbol_at(r));
    add(symbol_at(r + block_length));
  }
  return cover;
}

}  // namespace

bool window_covers(std::span<const Symbol> w, int alphabet_size, Position r, int block_length) {
  if (r < 1 || r + block_length - 1 > static_cast<Position>(w.size())) return false;
  std::vector<char> seen(static_cast<std::size_t>(alphabet_size) + 1, 0);
  int distinct = 0;
  for (Position n = r; n < r + block_length; ++n) {
    auto& flag = seen[static_cast<std::size_t>(w[static_cast<std::size_t>(n - 1)])];
    if (!flag) {
      flag = 1;
      ++distinct;
    }
  }
  return distinct == alphabet_size;
}

Starts greedy_starts_in_word(std::span<const Symbol> w, int alphabet_size, int block_length,
                             std::size_t max_blocks) {
  require_block_length(alphabet_size, block_length);
  const Position last = static_cast<Position>(w.size()) - block_length + 1;
  Starts starts;
  if (last < 1) return starts;
  const auto cover = cover_table(
      [&](Position n) { return w[static_cast<std::size_t>(n - 1)]; }, alphabet_size, block_length,
      last);
  Position r = 1;
  while (r <= last && starts.size() < max_blocks) {
    if (cover[static_cast<std::size_t>(r)]) {
      starts.push_back(r);
      r += block_length;
    } else {
      ++r;
    }
  }
  return starts;
}

Position GreedyPartition::start(std::size_t k) const {
  if (k == 0) throw Error(ErrorCode::OutOfHorizon, "blocks are numbered from 1");
  if (const auto* inf = std::get_if<ProvenInfinite>(&status)) {
    if (k <= head_.size()) return head_[k - 1];
    const std::size_t offset = k - inf->preperiod_blocks - 1;
    const std::size_t cycles = offset / inf->cycle_blocks;
    const std::size_t phase = offset % inf->cycle_blocks;
    return head_[inf->preperiod_blocks + phase] + static_cast<Position>(cycles) * inf->cycle_span;
  }
  if (k <= head_.size()) return head_[k - 1];
  throw Error(ErrorCode::OutOfHorizon, "greedy block " + std::to_string(k) + " is not available");
}

std::size_t GreedyPartition::block_count() const {
  if (proven_infinite()) return SIZE_MAX;
  return head_.size();
}

GreedyPartition greedy_partition(const Sequence& x, int block_length, std::size_t max_blocks) {
  const int n = x.alphabet().size();
  require_block_length(n, block_length);
  GreedyPartition out;
  out.block_length = block_length;

  if (!x.is_exact()) {
    out.head_ = greedy_starts_in_word(x.prefix_word(), n, block_length);
    out.status = UndeterminedBeyondHorizon{*x.horizon()};
    out.starts.assign(out.head_.begin(),
                      out.head_.begin() + static_cast<std::ptrdiff_t>(
                                              std::min(max_blocks, out.head_.size())));
    return out;
  }

  const auto& model = x.periodic_model();
  const auto t = static_cast<Position>(model.transient.size());
  const auto p = static_cast<Position>(model.period.size());
  // Beyond the transient, coverage of the window at r depends only on the
  // phase (r - t - 1) mod p, so the table over 1..t+p decides every r.
  const auto cover =
      cover_table([&](Position pos) { return x.at(pos); }, n, block_length, t + p);
  auto covers = [&](Position r) {
    if (r > t) r = t + 1 + (r - t - 1) % p;
    return cover[static_cast<std::size_t>(r)] != 0;
  };
  auto next_cover = [&](Position from) -> std::optional<Position> {
    Position r = from;
    for (; r <= t; ++r) {
      if (covers(r)) return r;
    }
    for (Position step = 0; step < p; ++step, ++r) {
      if (covers(r)) return r;
    }
    return std::nullopt;
  };

  std::vector<std::ptrdiff_t> block_at_phase(static_cast<std::size_t>(p), -1);
  Position from = 1;
  while (true) {
    const auto r = next_cover(from);
    if (!r) {
      out.status = ExistsUpToBlock{out.head_.size()};
      break;
    }
    if (*r > t) {
      const auto phase = static_cast<std::size_t>((*r - t - 1) % p);
      if (block_at_phase[phase] >= 0) {
        const auto first = static_cast<std::size_t>(block_at_phase[phase]);
        ProvenInfinite inf;
        inf.preperiod_blocks = first;
        inf.cycle_blocks = out.head_.size() - first;
        inf.cycle_span = *r - out.head_[first];
        Position prev = out.head_[first];
        for (std::size_t i = first + 1; i <= out.head_.size(); ++i) {
          const Position cur = i < out.head_.size() ? out.head_[i] : *r;
          inf.eventual_gap = std::max(inf.eventual_gap, cur - prev);
          prev = cur;
        }
        out.status = inf;
        break;
      }
      block_at_phase[phase] = static_cast<std::ptrdiff_t>(out.head_.size());
    }
    out.head_.push_back(*r);
    from = *r + block_length;
  }

  std::size_t listed = std::min(max_blocks, out.head_.size());
  if (out.proven_infinite() && max_blocks != SIZE_MAX) listed = max_blocks;
  out.starts.reserve(std::min<std::size_t>(listed, 1u << 20));
  for (std::size_t k = 1; k <= listed; ++k) out.starts.push_back(out.start(k));
  return out;
}

std::vector<Starts> enumerate_valid_partitions(std::span<const Symbol> prefix, int alphabet_size,
                                               int block_length, std::size_t max_prefix,
                                               int max_alphabet) {
  require_block_length(alphabet_size, block_length);
  if (prefix.size() > max_prefix || alphabet_size > max_alphabet) {
    throw Error(ErrorCode::CapExceeded, "partition enumeration limited to prefixes of length " +
                                            std::to_string(max_prefix) + " and alphabets of size " +
                                            std::to_string(max_alphabet));
  }
  const Position last = static_cast<Position>(prefix.size()) - block_length + 1;
  std::vector<char> cover(static_cast<std::size_t>(std::max<Position>(last, 0)) + 1, 0);
  for (Position r = 1; r <= last; ++r) {
    cover[static_cast<std::size_t>(r)] = window_covers(prefix, alphabet_size, r, block_length);
  }

  std::vector<Starts> out;
  Starts current;
  std::function<void(Position)> extend = [&](Position from) {
    out.push_back(current);
    for (Position r = from; r <= last; ++r) {
      if (!cover[static_cast<std::size_t>(r)]) continue;
      current.push_back(r);
      extend(r + block_length);
      current.pop_back();
    }
  };
  extend(1);
  std::stable_sort(out.begin(), out.end(), [](const Starts& a, const Starts& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
  });
  return out;
}

BlockDecomposition decompose(const Sequence& x, std::span<const Position> starts, int block_length) {
  require_block_length(x.alphabet().size(), block_length);
  BlockDecomposition out;
  out.block_length = block_length;
  out.starts.assign(starts.begin(), starts.end());
  Position previous_end = 0;
  for (std::size_t k = 0; k < starts.size(); ++k) {
    const Position r = starts[k];
    if (r <= previous_end) {
      throw Error(ErrorCode::InvalidPartition,
                  "block " + std::to_string(k + 1) + " at " + std::to_string(r) +
                      " overlaps the previous block");
    }
    const Word block = x.take(r + block_length - 1);
    if (!window_covers(block, x.alphabet().size(), r, block_length)) {
      throw Error(ErrorCode::InvalidPartition, "block " + std::to_string(k + 1) + " at " +
                                                   std::to_string(r) +
                                                   " does not contain every symbol");
    }
    out.gaps.push_back(r - previous_end - 1);
    previous_end = r + block_length - 1;
  }
  return out;
}

QuasiPeriodReport quasi_period(const Sequence& x) {
  const auto& model = x.periodic_model();
  const int n = x.alphabet().size();
  const auto t = static_cast<Position>(model.transient.size());
  const auto p = static_cast<Position>(model.period.size());
  std::vector<char> present(static_cast<std::size_t>(n) + 1, 0);
  for (Symbol s : model.period) present[static_cast<std::size_t>(s)] = 1;
  if (std::count(present.begin() + 1, present.end(), 1) != n) return {std::nullopt};
  // Windows starting past the transient repeat with period p, so starts
  // 1..t+p cover every case; any window of length t+p contains a full period.
  for (Position m = n; m <= t + p; ++m) {
    const auto cover = cover_table([&](Position pos) { return x.at(pos); }, n,
                                   static_cast<int>(m), t + p);
    if (std::all_of(cover.begin() + 1, cover.end(), [](char c) { return c != 0; })) {
      return {m};
    }
  }
  return {t + p};
}

Rational partial_sum(std::span<const Position> starts, std::size_t count) {
  if (count > starts.size()) throw Error(ErrorCode::OutOfHorizon, "count exceeds number of starts");
  Rational sum = 0;
  for (std::size_t k = 0; k < count; ++k) sum += Rational(1, starts[k]);
  return sum;
}

Interval partial_sum_interval(std::span<const Position> starts, std::size_t count) {
  if (count > starts.size()) throw Error(ErrorCode::OutOfHorizon, "count exceeds number of starts");
  Interval sum;
  for (std::size_t k = 0; k < count; ++k) sum = sum + Interval::reciprocal(starts[k]);
  return sum;
}

double to_double(const Rational& q) { return q.convert_to<double>(); }

}  // namespace pol
