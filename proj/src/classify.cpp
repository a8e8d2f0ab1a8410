#include "pol/classify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <set>
#include <sstream>
#include <utility>

#include "pol/rng.hpp"

namespace pol {

// ---------------------------------------------------------------------------
// Bound functions and weight families

BoundFunction BoundFunction::linear(double c) {
  return BoundFunction("linear", {c}, [c](Position k) { return c * static_cast<double>(k); },
                       c >= 0 ? std::optional<double>(c) : std::nullopt);
}

BoundFunction BoundFunction::constant(double c) {
  return BoundFunction("constant", {c}, [c](Position) { return c; },
                       c >= 0 ? std::optional<double>(0.0) : std::nullopt);
}

BoundFunction BoundFunction::affine(double a, double b) {
  return BoundFunction("affine", {a, b},
                       [a, b](Position k) { return a + b * static_cast<double>(k); },
                       a >= 0 ? std::optional<double>(b) : std::nullopt);
}

BoundFunction BoundFunction::power(double c, double base) {
  return BoundFunction("power", {c, base},
                       [c, base](Position k) { return c * std::pow(base, static_cast<double>(k)); },
                       std::nullopt);
}

BoundFunction BoundFunction::custom(std::string name, Evaluator fn,
                                    std::optional<double> lower_slope) {
  return BoundFunction(std::move(name), {}, std::move(fn), lower_slope);
}

std::vector<Position> BoundFunction::monotonicity_violations(Position upto) const {
  std::vector<Position> out;
  for (Position k = 1; k < upto; ++k) {
    if (fn_(k) > fn_(k + 1)) out.push_back(k);
  }
  return out;
}

WeightFamily WeightFamily::unit() {
  return WeightFamily("unit", [](int, std::span<const Position>) { return 1.0; });
}

WeightFamily WeightFamily::block_index() {
  return WeightFamily("index", [](int, std::span<const Position> starts) {
    return static_cast<double>(starts.size());
  });
}

WeightFamily WeightFamily::log_index() {
  return WeightFamily("log_index", [](int, std::span<const Position> starts) {
    return 1.0 + std::log(static_cast<double>(starts.size()));
  });
}

WeightFamily WeightFamily::log_start() {
  return WeightFamily("log_start", [](int, std::span<const Position> starts) {
    return 1.0 + std::log(static_cast<double>(starts.back()));
  });
}

WeightFamily WeightFamily::custom(std::string name, Evaluator fn) {
  return WeightFamily(std::move(name), std::move(fn));
}

std::size_t WeightFamily::monotonicity_violations(int block_length, int pairs,
                                                  std::uint64_t seed) const {
  SplitMix64 rng(seed);
  constexpr std::size_t kBlocks = 24;
  auto random_partition = [&] {
    Starts r;
    Position next = rng.uniform_int(1, 2 * block_length);
    for (std::size_t k = 0; k < kBlocks; ++k) {
      r.push_back(next);
      next += block_length + rng.uniform_int(0, 2 * block_length);
    }
    return r;
  };
  std::size_t violations = 0;
  for (int i = 0; i < pairs; ++i) {
    const Starts r = random_partition();
    const Starts s = random_partition();
    for (std::size_t k = 1; k <= kBlocks; ++k) {
      if (r[k - 1] > s[k - 1]) continue;
      const double fr = fn_(block_length, std::span<const Position>(r.data(), k));
      const double fs = fn_(block_length, std::span<const Position>(s.data(), k));
      if (fr > fs + 1e-12 * std::abs(fs)) ++violations;
    }
  }
  return violations;
}

// ---------------------------------------------------------------------------
// Set descriptors

void validate_set(const SetDescriptor& set, Alphabet alphabet) {
  const int n = alphabet.size();
  auto require_l = [n](int L) {
    if (L < n) {
      throw Error(ErrorCode::LTooSmall, "block length " + std::to_string(L) +
                                            " is smaller than the alphabet size " +
                                            std::to_string(n));
    }
  };
  std::visit(
      [&](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, SetA>) {
          require_l(s.L);
          if (s.M < 1) throw Error(ErrorCode::DomainError, "A{L,M} needs M >= 1");
        } else if constexpr (std::is_same_v<T, SetB>) {
          require_l(s.L);
        } else if constexpr (std::is_same_v<T, SetF>) {
          if (!alphabet.contains(s.n)) throw Error(ErrorCode::InvalidSymbol, "F{n,M} needs n in 1..N");
          if (s.M < 0) throw Error(ErrorCode::DomainError, "F{n,M} needs M >= 0");
        } else if constexpr (std::is_same_v<T, SetNLc>) {
          require_l(s.L);
        } else {
          require_l(s.L);
          if (!(s.M >= 0)) throw Error(ErrorCode::DomainError, "weighted A needs M >= 0");
        }
      },
      set);
}

std::string set_name(const SetDescriptor& set) {
  return std::visit(
      [](const auto& s) -> std::string {
        using T = std::decay_t<decltype(s)>;
        std::ostringstream os;
        if constexpr (std::is_same_v<T, SetA>) {
          os << "A{L=" << s.L << ",M=" << s.M << "}";
        } else if constexpr (std::is_same_v<T, SetB>) {
          os << "B{L=" << s.L << ",k=" << s.k << "}";
        } else if constexpr (std::is_same_v<T, SetF>) {
          os << "F{n=" << s.n << ",M=" << s.M << "}";
        } else if constexpr (std::is_same_v<T, SetNLc>) {
          os << "NLc{L=" << s.L << ",p=" << s.bound.kind() << "}";
        } else {
          os << "Af{L=" << s.L << ",M=" << s.M << ",f=" << s.weights.kind() << "}";
        }
        return os.str();
      },
      set);
}

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::Member: return "Member";
    case Verdict::NonMember: return "NonMember";
    case Verdict::ExcludedByPrefix: return "ExcludedByPrefix";
    case Verdict::UndeterminedAtHorizon: return "UndeterminedAtHorizon";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Quasi-normality

namespace {

std::optional<Symbol> missing_from_period(const Sequence& x) {
  const auto& period = x.periodic_model().period;
  for (Symbol s = 1; s <= x.alphabet().size(); ++s) {
    if (std::find(period.begin(), period.end(), s) == period.end()) return s;
  }
  return std::nullopt;
}

constexpr std::size_t kListedStarts = 8;

}  // namespace

ClassificationReport is_quasi_normal(const Sequence& x) {
  if (!x.is_exact()) {
    throw Error(ErrorCode::UndecidableAtHorizon,
                "quasi-normality depends on the tail; a finite prefix cannot decide it");
  }
  ClassificationReport report;
  if (const auto missing = missing_from_period(x)) {
    report.verdict = Verdict::NonMember;
    report.certificate.missing = *missing;
    report.certificate.reason = "symbol " + std::to_string(*missing) +
                                " occurs only finitely often, so no infinite block partition exists";
    return report;
  }
  const int n = x.alphabet().size();
  const int longest = std::max<int>(n, static_cast<int>(x.periodic_model().period.size()));
  for (int L = n; L <= longest; ++L) {
    const auto g = greedy_partition(x, L, kListedStarts);
    if (!g.proven_infinite()) continue;
    const auto& inf = std::get<ProvenInfinite>(g.status);
    report.verdict = Verdict::Member;
    report.certificate.L = L;
    report.certificate.starts = g.starts;
    report.certificate.eventual_gap = inf.eventual_gap;
    report.certificate.partial_sum = partial_sum_interval(g.starts, g.starts.size());
    std::ostringstream os;
    os << "greedy " << L << "-partition is infinite; after block " << inf.preperiod_blocks
       << " starts repeat every " << inf.cycle_blocks << " blocks per " << inf.cycle_span
       << " positions, so r_k grows at most linearly (gap <= " << inf.eventual_gap
       << ") and sum 1/r_k diverges";
    report.certificate.reason = os.str();
    return report;
  }
  // Unreachable: with every symbol in the period, L = period length works.
  throw Error(ErrorCode::InvalidPartition, "no infinite greedy partition found");
}

QuasiNormalDiagnostics quasi_normal_diagnostics(const Sequence& prefix, int L, std::size_t count) {
  QuasiNormalDiagnostics out;
  out.L = L;
  const auto g = greedy_partition(prefix, L, count == SIZE_MAX && prefix.is_exact() ? 64 : count);
  out.starts = g.starts;
  Interval running;
  Position gap_sum = 0;
  Position previous_end = 0;
  for (Position r : out.starts) {
    running = running + Interval::reciprocal(r);
    out.partial_sums.push_back(running);
    gap_sum += r - previous_end - 1;
    previous_end = r + L - 1;
    out.gap_sums.push_back(gap_sum);
  }
  if (out.starts.size() <= kExactSumLimit) out.sum = partial_sum(out.starts, out.starts.size());
  return out;
}

Interval a_threshold(int L, std::int64_t M) {
  if (M == 1) return Interval::point(0.0);
  return Interval::log(static_cast<double>(M)) / L;
}

// ---------------------------------------------------------------------------
// Membership

namespace {

std::int64_t count_symbol(std::span<const Symbol> w, Symbol s) {
  return std::count(w.begin(), w.end(), s);
}

ClassificationReport excluded_from_A_word(std::span<const Symbol> w, int alphabet_size, int L,
                                          std::int64_t M) {
  ClassificationReport report;
  const Starts starts = greedy_starts_in_word(w, alphabet_size, L);
  const Interval sum = partial_sum_interval(starts, starts.size());
  const Interval threshold = a_threshold(L, M);
  report.certificate.L = L;
  report.certificate.starts = starts;
  report.certificate.partial_sum = sum;
  report.certificate.threshold = threshold;
  if (sum.certainly_ge(threshold)) {
    report.verdict = Verdict::ExcludedByPrefix;
    report.certificate.reason = "greedy blocks inside the prefix already give sum 1/r_k >= (1/L) log M; "
                                "extensions keep these blocks and only add terms";
  } else {
    report.verdict = Verdict::UndeterminedAtHorizon;
    report.certificate.reason = "partial sum below the threshold at this horizon";
  }
  return report;
}

ClassificationReport membership_A(const Sequence& x, const SetA& s, const ClassifyOptions& opt) {
  if (!x.is_exact()) return excluded_from_A(x, s.L, s.M);
  ClassificationReport report;
  report.certificate.L = s.L;
  report.certificate.threshold = a_threshold(s.L, s.M);
  const auto g = greedy_partition(x, s.L, kListedStarts);
  report.certificate.starts = g.starts;
  if (!g.proven_infinite()) {
    report.verdict = Verdict::NonMember;
    report.certificate.reason = "greedy partition exists only up to block " +
                                std::to_string(g.block_count()) + "; A requires existence";
    return report;
  }
  const auto& inf = std::get<ProvenInfinite>(g.status);
  report.verdict = Verdict::NonMember;
  report.certificate.eventual_gap = inf.eventual_gap;
  // Cross-check: sum until the threshold is certainly crossed.
  Interval sum;
  std::size_t crossed_at = 0;
  for (std::size_t k = 1; k <= opt.cross_check_terms; ++k) {
    sum = sum + Interval::reciprocal(g.start(k));
    if (sum.certainly_ge(*report.certificate.threshold)) {
      crossed_at = k;
      break;
    }
  }
  report.certificate.partial_sum = sum;
  std::ostringstream os;
  os << "greedy partition is infinite with eventual gap <= " << inf.eventual_gap
     << ", so sum 1/r_k diverges";
  if (crossed_at) {
    os << "; partial sum crosses (1/L) log M after " << crossed_at << " blocks";
  } else {
    os << "; threshold not yet crossed within " << opt.cross_check_terms << " summed blocks";
  }
  report.certificate.reason = os.str();
  return report;
}

ClassificationReport membership_B(const Sequence& x, const SetB& s) {
  ClassificationReport report;
  report.certificate.L = s.L;
  const auto g = greedy_partition(x, s.L, s.k + 1);
  report.certificate.starts = g.starts;
  if (!x.is_exact()) {
    if (g.starts.size() >= s.k + 1) {
      report.verdict = Verdict::ExcludedByPrefix;
      report.certificate.reason = "prefix already fixes " + std::to_string(s.k + 1) + " greedy blocks";
    } else {
      report.verdict = Verdict::UndeterminedAtHorizon;
      report.certificate.reason = "only " + std::to_string(g.starts.size()) +
                                  " greedy blocks fixed by the prefix";
    }
    return report;
  }
  if (g.proven_infinite()) {
    report.verdict = Verdict::NonMember;
    report.certificate.reason = "greedy partition is infinite";
  } else if (g.block_count() <= s.k) {
    report.verdict = Verdict::Member;
    report.certificate.reason = "greedy partition exists up until block " +
                                std::to_string(g.block_count());
  } else {
    report.verdict = Verdict::NonMember;
    report.certificate.reason = "greedy partition reaches block " + std::to_string(g.block_count());
  }
  return report;
}

ClassificationReport membership_F(const Sequence& x, const SetF& s) {
  ClassificationReport report;
  if (s.M == 0) {
    report.verdict = x.is_exact() ? Verdict::NonMember : Verdict::ExcludedByPrefix;
    report.certificate.reason = "no sequence has fewer than 0 occurrences";
    return report;
  }
  if (!x.is_exact()) {
    const auto c = count_symbol(x.prefix_word(), s.n);
    if (c >= s.M) {
      report.verdict = Verdict::ExcludedByPrefix;
      report.certificate.reason = "prefix already holds " + std::to_string(c) + " occurrences";
    } else {
      report.verdict = Verdict::UndeterminedAtHorizon;
      report.certificate.reason = std::to_string(c) + " occurrences within the prefix";
    }
    return report;
  }
  const auto& m = x.periodic_model();
  if (count_symbol(m.period, s.n) > 0) {
    report.verdict = Verdict::NonMember;
    report.certificate.reason = "symbol occurs in the period, hence infinitely often";
    return report;
  }
  const auto c = count_symbol(m.transient, s.n);
  report.verdict = c < s.M ? Verdict::Member : Verdict::NonMember;
  report.certificate.reason = "symbol occurs exactly " + std::to_string(c) + " times";
  return report;
}

ClassificationReport membership_weighted(const Sequence& x, const SetWeightedA& s,
                                         const ClassifyOptions& opt) {
  ClassificationReport report;
  report.certificate.L = s.L;
  report.certificate.threshold = Interval::point(s.M);
  const Interval threshold = Interval::point(s.M);
  if (!x.is_exact()) {
    const Starts starts = greedy_starts_in_word(x.prefix_word(), x.alphabet().size(), s.L);
    const Interval sum = weighted_partial_sum(starts, s.L, s.weights, starts.size());
    report.certificate.starts = starts;
    report.certificate.partial_sum = sum;
    if (sum.certainly_ge(threshold)) {
      report.verdict = Verdict::ExcludedByPrefix;
      report.certificate.reason = "weighted sum over greedy blocks inside the prefix reaches M";
    } else {
      report.verdict = Verdict::UndeterminedAtHorizon;
      report.certificate.reason = "weighted partial sum below M at this horizon";
    }
    return report;
  }
  const auto g = greedy_partition(x, s.L, kListedStarts);
  report.certificate.starts = g.starts;
  if (!g.proven_infinite()) {
    report.verdict = Verdict::NonMember;
    report.certificate.reason = "greedy partition is finite; the set requires existence";
    return report;
  }
  Starts starts;
  Interval sum;
  const std::size_t cap = std::min(opt.iteration_cap, opt.search_cap * 10);
  for (std::size_t k = 1; k <= cap; ++k) {
    starts.push_back(g.start(k));
    const double f = s.weights(s.L, starts);
    if (!(f > 0)) throw Error(ErrorCode::NonpositiveWeight, "weight at block " + std::to_string(k));
    sum = sum + Interval::reciprocal_product(static_cast<double>(starts.back()), f);
    if (sum.certainly_ge(threshold)) {
      report.verdict = Verdict::NonMember;
      report.certificate.partial_sum = sum;
      report.certificate.reason = "weighted sum reaches M after " + std::to_string(k) + " blocks";
      return report;
    }
  }
  report.verdict = Verdict::UndeterminedAtHorizon;
  report.certificate.partial_sum = sum;
  report.certificate.reason = "weighted sum still below M after " + std::to_string(cap) + " blocks";
  return report;
}

}  // namespace

ClassificationReport excluded_from_A(const Sequence& prefix, int L, std::int64_t M) {
  validate_set(SetA{L, M}, prefix.alphabet());
  if (prefix.is_exact()) return membership(prefix, SetA{L, M});
  return excluded_from_A_word(prefix.prefix_word(), prefix.alphabet().size(), L, M);
}

ClassificationReport membership(const Sequence& x, const SetDescriptor& set,
                                const ClassifyOptions& options) {
  validate_set(set, x.alphabet());
  return std::visit(
      [&](const auto& s) -> ClassificationReport {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, SetA>) {
          return membership_A(x, s, options);
        } else if constexpr (std::is_same_v<T, SetB>) {
          return membership_B(x, s);
        } else if constexpr (std::is_same_v<T, SetF>) {
          return membership_F(x, s);
        } else if constexpr (std::is_same_v<T, SetNLc>) {
          return satisfies_P_Lc(x, s.L, s.bound, options.search_cap);
        } else {
          return membership_weighted(x, s, options);
        }
      },
      set);
}

// ---------------------------------------------------------------------------
// Cumulative gap bounds

namespace {

// Cumulative gap sum in front of block k when it starts at r.
Position gap_before(Position r, std::size_t k, int L) {
  return r - 1 - static_cast<Position>(k - 1) * L;
}

bool within(Position gap, double bound) { return static_cast<double>(gap) <= bound; }

}  // namespace

ClassificationReport satisfies_P_Lc(const Sequence& x, int L, const BoundFunction& bound,
                                    std::size_t search_cap) {
  validate_set(SetNLc{L, bound}, x.alphabet());
  ClassificationReport report;
  report.certificate.L = L;
  // Any representation's starts dominate the greedy starts pointwise, so
  // the greedy cumulative gaps are the smallest possible: a representation
  // satisfying the bound exists iff the greedy one does.
  if (!x.is_exact()) {
    const Word& w = x.prefix_word();
    const Starts starts = greedy_starts_in_word(w, x.alphabet().size(), L);
    report.certificate.starts = starts;
    const auto h = static_cast<Position>(w.size());
    // K' blocks kept inside the prefix, then the next block must start at
    // or after max(h - L + 2, r_K' + L).
    for (std::size_t kept = 0; kept <= starts.size(); ++kept) {
      if (kept > 0 && !within(gap_before(starts[kept - 1], kept, L), bound(static_cast<Position>(kept)))) {
        break;
      }
      const Position earliest =
          std::max<Position>(h - L + 2, kept == 0 ? 1 : starts[kept - 1] + L);
      if (within(gap_before(earliest, kept + 1, L), bound(static_cast<Position>(kept + 1)))) {
        report.verdict = Verdict::UndeterminedAtHorizon;
        report.certificate.reason = "a representation keeping " + std::to_string(kept) +
                                    " greedy blocks respects the bound up to the horizon";
        return report;
      }
    }
    report.verdict = Verdict::ExcludedByPrefix;
    report.certificate.reason =
        "every representation of every extension exceeds the cumulative gap bound";
    return report;
  }

  const auto g = greedy_partition(x, L, 0);
  if (!g.proven_infinite()) {
    report.verdict = Verdict::NonMember;
    report.certificate.reason = "only " + std::to_string(g.block_count()) +
                                " blocks covering the alphabet exist";
    return report;
  }
  const auto& inf = std::get<ProvenInfinite>(g.status);
  const std::size_t head = inf.preperiod_blocks + inf.cycle_blocks;
  if (head > search_cap) {
    throw Error(ErrorCode::CapExceeded, "greedy cycle starts after " + std::to_string(head) +
                                            " blocks, beyond the search cap");
  }
  for (std::size_t k = 1; k <= std::min<std::size_t>(head, kListedStarts); ++k) {
    report.certificate.starts.push_back(g.start(k));
  }
  for (std::size_t k = 1; k <= head; ++k) {
    if (!within(gap_before(g.start(k), k, L), bound(static_cast<Position>(k)))) {
      report.verdict = Verdict::NonMember;
      report.certificate.violated_at = k;
      report.certificate.reason = "minimal cumulative gap " +
                                  std::to_string(gap_before(g.start(k), k, L)) +
                                  " exceeds the bound at block " + std::to_string(k);
      return report;
    }
  }
  // Each cycle adds `growth` to the cumulative gap.
  const Position growth = inf.cycle_span - static_cast<Position>(inf.cycle_blocks) * L;
  const bool monotone = bound.monotonicity_violations(static_cast<Position>(head) + 64).empty();
  if (growth == 0 && monotone) {
    report.verdict = Verdict::Member;
    report.certificate.reason = "gaps vanish after block " + std::to_string(inf.preperiod_blocks) +
                                "; cumulative gaps stay constant while the bound increases";
    return report;
  }
  if (const auto slope = bound.linear_lower_slope(); slope && monotone) {
    bool dominated = static_cast<double>(growth) <= *slope * static_cast<double>(inf.cycle_blocks);
    for (std::size_t k = inf.preperiod_blocks + 1; dominated && k <= head; ++k) {
      dominated = static_cast<double>(gap_before(g.start(k), k, L)) <= *slope * static_cast<double>(k);
    }
    if (dominated) {
      report.verdict = Verdict::Member;
      report.certificate.reason = "cumulative gaps grow by " + std::to_string(growth) + " per " +
                                  std::to_string(inf.cycle_blocks) +
                                  " blocks, dominated by the bound's linear lower slope";
      return report;
    }
  }
  for (std::size_t k = head + 1; k <= search_cap; ++k) {
    if (!within(gap_before(g.start(k), k, L), bound(static_cast<Position>(k)))) {
      report.verdict = Verdict::NonMember;
      report.certificate.violated_at = k;
      report.certificate.reason = "minimal cumulative gap exceeds the bound at block " +
                                  std::to_string(k);
      return report;
    }
  }
  report.verdict = Verdict::UndeterminedAtHorizon;
  report.certificate.reason = monotone ? "bound respected for " + std::to_string(search_cap) +
                                             " blocks; its growth cannot be compared beyond that"
                                       : "bound is not increasing; tail not extrapolated";
  return report;
}

RepresentationSearch search_representations(std::span<const Symbol> w, int alphabet_size, int L,
                                            const BoundFunction& bound) {
  if (L < alphabet_size) throw Error(ErrorCode::LTooSmall, "block length below alphabet size");
  RepresentationSearch out;
  const auto h = static_cast<Position>(w.size());
  const Position last = h - L + 1;
  std::vector<char> cover(static_cast<std::size_t>(std::max<Position>(last, 0)) + 1, 0);
  for (Position r = 1; r <= last; ++r) {
    cover[static_cast<std::size_t>(r)] = window_covers(w, alphabet_size, r, L);
  }
  std::set<std::pair<Position, std::size_t>> failed;
  Starts chosen;
  std::function<bool(Position, std::size_t)> feasible = [&](Position from, std::size_t placed) {
    ++out.states_visited;
    if (failed.count({from, placed})) return false;
    const double next_bound = bound(static_cast<Position>(placed + 1));
    if (within(gap_before(std::max<Position>(h - L + 2, from), placed + 1, L), next_bound)) {
      return true;
    }
    for (Position r = from; r <= last; ++r) {
      if (!within(gap_before(r, placed + 1, L), next_bound)) break;
      if (!cover[static_cast<std::size_t>(r)]) continue;
      chosen.push_back(r);
      if (feasible(r + L, placed + 1)) return true;
      chosen.pop_back();
    }
    failed.insert({from, placed});
    return false;
  };
  out.feasible = feasible(1, 0);
  if (out.feasible) out.blocks = chosen;
  return out;
}

// ---------------------------------------------------------------------------
// Weighted sums and divergence certificates

Interval weighted_partial_sum(std::span<const Position> starts, int L, const WeightFamily& weights,
                              std::size_t count) {
  if (count > starts.size()) throw Error(ErrorCode::OutOfHorizon, "count exceeds number of starts");
  Interval sum;
  for (std::size_t k = 1; k <= count; ++k) {
    const double f = weights(L, starts.subspan(0, k));
    if (!(f > 0)) {
      throw Error(ErrorCode::NonpositiveWeight, "weight " + std::to_string(f) + " at block " +
                                                    std::to_string(k));
    }
    sum = sum + Interval::reciprocal_product(static_cast<double>(starts[k - 1]), f);
  }
  return sum;
}

std::size_t DivergenceCertificate::weight(std::size_t k) const {
  for (std::size_t l = 1; l < level_starts.size(); ++l) {
    if (k >= level_starts[l - 1] && k < level_starts[l]) return l;
  }
  throw Error(ErrorCode::OutOfHorizon, "block " + std::to_string(k) + " beyond the built levels");
}

DivergenceCertificate build_divergence_certificate(const std::function<Position(std::size_t)>& starts,
                                                   std::size_t target_levels,
                                                   std::size_t iteration_cap) {
  DivergenceCertificate out;
  out.level_starts.push_back(1);
  std::size_t k = 1;
  std::size_t used = 0;
  for (std::size_t level = 1; level <= target_levels; ++level) {
    const auto target = Interval::point(static_cast<double>(level));
    const std::size_t first = k;
    Interval sum;
    while (true) {
      if (++used > iteration_cap) {
        throw Error(ErrorCode::DivergenceTooSlow, "level " + std::to_string(level) +
                                                      " not completed within " +
                                                      std::to_string(iteration_cap) + " terms");
      }
      sum = sum + Interval::reciprocal(starts(k));
      ++k;
      if (sum.certainly_ge(target)) break;
      if (sum.certainly_lt(target)) continue;
      // Too close to call in floating point: decide exactly.
      Rational exact = 0;
      for (std::size_t i = first; i < k; ++i) exact += Rational(1, starts(i));
      if (exact >= static_cast<long>(level)) break;
    }
    out.level_starts.push_back(k);
    out.level_sums.push_back(sum);
    out.weighted_level_sums.push_back(sum / static_cast<std::int64_t>(level));
  }
  return out;
}

}  // namespace pol
