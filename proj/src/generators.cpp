#include "pol/generators.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>
#include <thread>

#include "pol/partition.hpp"
#include "pol/rng.hpp"

namespace pol {

namespace {

constexpr int kQuasiPeriodicAttempts = 100;

// Fisher-Yates with the library generator, so shuffles reproduce exactly.
void shuffle(Word& w, SplitMix64& rng) {
  for (std::size_t i = w.size(); i > 1; --i) {
    const auto j = static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(i - 1)));
    std::swap(w[i - 1], w[j]);
  }
}

Word random_permutation(int n, SplitMix64& rng) {
  Word w(static_cast<std::size_t>(n));
  std::iota(w.begin(), w.end(), 1);
  shuffle(w, rng);
  return w;
}

Symbol random_symbol(int n, SplitMix64& rng) { return static_cast<Symbol>(rng.uniform_int(1, n)); }

// A length-L word containing every symbol, otherwise uniform.
Word covering_block(int n, int L, SplitMix64& rng) {
  Word w = random_permutation(n, rng);
  while (static_cast<int>(w.size()) < L) w.push_back(random_symbol(n, rng));
  shuffle(w, rng);
  return w;
}

// Each new entry keeps the window of length m ending at it covering: once a
// full window exists, its last m-1 entries miss at most one symbol, which is
// then forced; otherwise the entry is free.
Word quasi_periodic_candidate(int n, Position m, SplitMix64& rng) {
  const Position length = rng.uniform_int(m, 2 * m);
  Word w = covering_block(n, static_cast<int>(m), rng);
  std::vector<int> seen(static_cast<std::size_t>(n) + 1, 0);
  while (static_cast<Position>(w.size()) < length) {
    std::fill(seen.begin(), seen.end(), 0);
    for (std::size_t i = w.size() - static_cast<std::size_t>(m - 1); i < w.size(); ++i) {
      seen[static_cast<std::size_t>(w[i])] = 1;
    }
    Symbol missing = 0;
    for (Symbol s = 1; s <= n; ++s) {
      if (!seen[static_cast<std::size_t>(s)]) missing = s;
    }
    w.push_back(missing ? missing : random_symbol(n, rng));
  }
  return w;
}

Sequence generate_quasi_periodic(const QuasiPeriodicSpec& spec, Alphabet alphabet) {
  const int n = alphabet.size();
  if (spec.m < n) {
    throw Error(ErrorCode::InfeasibleSpec, "quasi-period " + std::to_string(spec.m) +
                                               " is below the alphabet size " + std::to_string(n));
  }
  SplitMix64 rng(spec.seed);
  for (int attempt = 0; attempt < kQuasiPeriodicAttempts; ++attempt) {
    auto x = Sequence::periodic(alphabet, quasi_periodic_candidate(n, spec.m, rng));
    // The wrap-around windows were not constrained during construction.
    if (const auto q = quasi_period(x).quasi_period; q && *q <= spec.m) return x;
  }
  return Sequence::periodic(alphabet, random_permutation(n, rng));
}

Sequence generate_pc_bounded(const PcBoundedSpec& spec, Alphabet alphabet) {
  const int n = alphabet.size();
  if (spec.L < n) throw Error(ErrorCode::InfeasibleSpec, "block length below alphabet size");
  if (!(spec.bound(1) >= 0)) throw Error(ErrorCode::InfeasibleSpec, "bound must be nonnegative");
  if (!spec.bound.monotonicity_violations(spec.length + 1).empty()) {
    throw Error(ErrorCode::InfeasibleSpec, "bound must be nondecreasing");
  }
  SplitMix64 rng(spec.seed);
  Word w;
  w.reserve(static_cast<std::size_t>(spec.length) + static_cast<std::size_t>(spec.L));
  Position used = 0;  // cumulative gap length
  for (Position k = 1; static_cast<Position>(w.size()) < spec.length; ++k) {
    const double budget = std::floor(spec.bound(k)) - static_cast<double>(used);
    const Position room = spec.length - static_cast<Position>(w.size());
    const Position gap = rng.uniform_int(0, static_cast<Position>(std::min<double>(budget, room)));
    for (Position i = 0; i < gap; ++i) w.push_back(random_symbol(n, rng));
    used += gap;
    const Word block = covering_block(n, spec.L, rng);
    w.insert(w.end(), block.begin(), block.end());
  }
  w.resize(static_cast<std::size_t>(spec.length));
  return Sequence::prefix(alphabet, std::move(w));
}

}  // namespace

Position RunGrowth::run_length(std::size_t k) const {
  const double v = kind == Kind::Exponential ? std::ceil(std::pow(base, static_cast<double>(k)))
                                             : std::round(offset + slope * static_cast<double>(k));
  return std::max<Position>(1, static_cast<Position>(v));
}

std::string generator_name(const GeneratorSpec& spec) {
  static constexpr const char* kNames[] = {"Periodic", "QuasiPeriodic", "IidUniform",
                                           "AdversarialRuns", "PcBounded"};
  return kNames[spec.index()];
}

Sequence generate(const GeneratorSpec& spec, Alphabet alphabet) {
  return std::visit(
      [&](const auto& s) -> Sequence {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, PeriodicSpec>) {
          if (s.pattern.empty()) throw Error(ErrorCode::InfeasibleSpec, "empty periodic pattern");
          return Sequence::periodic(alphabet, s.pattern);
        } else if constexpr (std::is_same_v<T, QuasiPeriodicSpec>) {
          return generate_quasi_periodic(s, alphabet);
        } else if constexpr (std::is_same_v<T, IidUniformSpec>) {
          SplitMix64 rng(s.seed);
          Word w(static_cast<std::size_t>(std::max<Position>(s.length, 0)));
          for (auto& v : w) v = random_symbol(alphabet.size(), rng);
          return Sequence::prefix(alphabet, std::move(w));
        } else if constexpr (std::is_same_v<T, AdversarialRunsSpec>) {
          const bool increasing = s.growth.kind == RunGrowth::Kind::Exponential ? s.growth.base > 1.0
                                                                                 : s.growth.slope > 0.0;
          if (!increasing) throw Error(ErrorCode::InfeasibleSpec, "run growth must be increasing");
          Word w;
          for (std::size_t k = 0; static_cast<Position>(w.size()) < s.length; ++k) {
            const auto symbol = static_cast<Symbol>(k % static_cast<std::size_t>(alphabet.size()) + 1);
            const auto run = std::min(s.growth.run_length(k), s.length - static_cast<Position>(w.size()));
            w.insert(w.end(), static_cast<std::size_t>(run), symbol);
          }
          return Sequence::prefix(alphabet, std::move(w));
        } else {
          return generate_pc_bounded(s, alphabet);
        }
      },
      spec);
}

GeneratorSpec with_seed(GeneratorSpec spec, std::uint64_t seed) {
  std::visit(
      [seed](auto& s) {
        if constexpr (requires { s.seed; }) s.seed = seed;
      },
      spec);
  return spec;
}

std::uint64_t trial_seed(std::uint64_t family_seed, std::size_t trial) {
  return SplitMix64(family_seed ^ (0xD1B54A32D192ED03ull * (trial + 1))).next();
}

TrialOutcome evaluate_trial(const Sequence& x, Position horizon, int L, std::int64_t M) {
  const auto prefix = Sequence::prefix(x.alphabet(), x.take(horizon));
  const auto diag = quasi_normal_diagnostics(prefix, L);
  TrialOutcome out;
  Position late_gaps = 0;
  for (std::size_t k = 0; k < diag.starts.size(); ++k) {
    if (2 * diag.starts[k] <= horizon) continue;
    const Position before = k == 0 ? 0 : diag.gap_sums[k - 1];
    late_gaps += diag.gap_sums[k] - before;
    ++out.late_blocks;
  }
  if (out.late_blocks > 0) {
    out.mean_late_gap = static_cast<double>(late_gaps) / static_cast<double>(out.late_blocks);
    out.bounded_density = out.mean_late_gap <= 2.0 * L;
  }
  out.excluded_from_A = excluded_from_A(prefix, L, M).verdict == Verdict::ExcludedByPrefix;
  return out;
}

RateRow empirical_class_rates(const std::string& spec_id, const GeneratorSpec& family,
                              Alphabet alphabet, const RateOptions& options) {
  std::vector<TrialOutcome> outcomes(options.trials);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < options.trials; i = next++) {
      const auto x = generate(with_seed(family, trial_seed(options.seed, i)), alphabet);
      outcomes[i] = evaluate_trial(x, options.horizon, options.L, options.M);
    }
  };
  const unsigned jobs = std::max(1u, std::min<unsigned>(options.jobs, static_cast<unsigned>(options.trials)));
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned j = 0; j < jobs; ++j) pool.emplace_back(worker);
  }

  RateRow row;
  row.spec_id = spec_id;
  row.trials = options.trials;
  if (options.trials == 0) return row;
  double gap_total = 0.0;
  for (const auto& o : outcomes) {
    row.bounded_density_rate += o.bounded_density;
    row.excluded_from_A_rate += o.excluded_from_A;
    gap_total += o.mean_late_gap;
  }
  const auto n = static_cast<double>(options.trials);
  row.bounded_density_rate /= n;
  row.excluded_from_A_rate /= n;
  row.mean_late_gap = gap_total / n;
  return row;
}

}  // namespace pol
