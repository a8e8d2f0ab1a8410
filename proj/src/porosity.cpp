#include "pol/porosity.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <sstream>

namespace pol {

// ---------------------------------------------------------------------------
// Gauge

double phi_inverse_log(double t) {
  if (!(t > 0.0 && t <= 1.0)) throw Error(ErrorCode::DomainError, "phi^{-1} needs t in (0, 1]");
  return std::log(t) / t;
}

double phi_inverse(double t) { return std::exp(phi_inverse_log(t)); }

double phi_of_log(double log_s) {
  if (!(log_s < 0.0) || !std::isfinite(log_s)) {
    throw Error(ErrorCode::DomainError, "phi needs s in (0, 1)");
  }
  // log(t)/t is strictly increasing on (0, 1).
  double lo = DBL_EPSILON;
  double hi = 1.0 - DBL_EPSILON;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    if (std::log(mid) / mid < log_s) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double phi(double s) {
  if (!(s > 0.0 && s < 1.0)) throw Error(ErrorCode::DomainError, "phi needs s in (0, 1)");
  return phi_of_log(std::log(s));
}

// ---------------------------------------------------------------------------
// Witnesses

namespace {

constexpr std::uint32_t kMaxWitnessAExponent = 24;
constexpr Position kMaxRadiusExponent = 1 << 30;

Word base_prefix(const Sequence& x, Position j) {
  if (const auto h = x.horizon(); h && *h < j) {
    throw Error(ErrorCode::PrefixTooShort, "base prefix has " + std::to_string(*h) +
                                               " entries, " + std::to_string(j) + " needed");
  }
  return x.take(j);
}

Word ascending(int n) {
  Word w(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) w[static_cast<std::size_t>(i)] = i + 1;
  return w;
}

DyadicRadius radius_of(Position exponent) {
  if (exponent > kMaxRadiusExponent) {
    throw Error(ErrorCode::CapExceeded, "exclusion radius 2^-" + std::to_string(exponent) +
                                            " is too small to certify");
  }
  return DyadicRadius{static_cast<std::uint32_t>(exponent)};
}

void require_proper_epsilon(DyadicRadius epsilon) {
  if (epsilon.exponent == 0) throw Error(ErrorCode::EpsilonTooLarge, "epsilon must be below 1");
}

// Ones followed by the period (1, ..., N), after the base prefix.
Sequence dense_tail(const Alphabet& alphabet, Word prefix, std::size_t ones) {
  prefix.insert(prefix.end(), ones, 1);
  return Sequence::eventually_periodic(alphabet, std::move(prefix), ascending(alphabet.size()));
}

}  // namespace

std::uint32_t witness_A_min_exponent(int alphabet_size, std::int64_t M) {
  if (M < 1) throw Error(ErrorCode::DomainError, "A{L,M} needs M >= 1");
  std::uint32_t e = static_cast<std::uint32_t>(3 * alphabet_size + 2);
  while (e < 63 && (std::int64_t{1} << e) <= 8 * M) ++e;
  return e;
}

Position witness_A_radius_exponent(std::uint32_t epsilon_exp) {
  if (epsilon_exp > kMaxWitnessAExponent) {
    throw Error(ErrorCode::CapExceeded, "epsilon exponent " + std::to_string(epsilon_exp) +
                                            " gives an unmanageable forced prefix");
  }
  return static_cast<Position>(epsilon_exp) << epsilon_exp;
}

WitnessCertificate witness_A(const Sequence& x, std::int64_t M, DyadicRadius epsilon) {
  const int n = x.alphabet().size();
  const auto e_min = witness_A_min_exponent(n, M);
  if (epsilon.exponent < e_min) {
    throw Error(ErrorCode::EpsilonTooLarge, "epsilon must be below min{1/(8M), 2^{-3N-1}}; "
                                            "smallest admissible exponent is " +
                                                std::to_string(e_min));
  }
  const Position m = witness_A_radius_exponent(epsilon.exponent);
  Word prefix = base_prefix(x, epsilon.exponent);
  std::ostringstream reason;
  reason << "every ball member starts with the " << m
         << " forced entries, whose greedy " << n
         << "-blocks already give sum 1/r_k >= (1/N) log M";
  return WitnessCertificate{SetA{n, M},
                            x.alphabet(),
                            prefix,
                            epsilon,
                            dense_tail(x.alphabet(), prefix, static_cast<std::size_t>(n)),
                            radius_of(m),
                            PrefixForcedArgument{m, reason.str()}};
}

WitnessCertificate witness_B(const Sequence& x, std::size_t k, DyadicRadius epsilon) {
  require_proper_epsilon(epsilon);
  const int n = x.alphabet().size();
  const Position forced = epsilon.exponent + n + static_cast<Position>(k + 1) * n;
  Word prefix = base_prefix(x, epsilon.exponent);
  std::ostringstream reason;
  reason << "the forced prefix of length " << forced << " holds " << k + 1
         << " disjoint blocks covering the alphabet, so every member's greedy partition reaches block "
         << k + 1;
  return WitnessCertificate{SetB{n, k},
                            x.alphabet(),
                            prefix,
                            epsilon,
                            dense_tail(x.alphabet(), prefix, static_cast<std::size_t>(n)),
                            radius_of(forced),
                            PrefixForcedArgument{forced, reason.str()}};
}

WitnessCertificate witness_F(const Sequence& x, Symbol symbol, std::int64_t M, DyadicRadius epsilon) {
  require_proper_epsilon(epsilon);
  validate_set(SetF{symbol, M}, x.alphabet());
  const Position forced = epsilon.exponent + M + 1;
  Word prefix = base_prefix(x, epsilon.exponent);
  std::ostringstream reason;
  reason << "entries " << epsilon.exponent + 1 << ".." << forced << " all equal " << symbol
         << ", giving at least " << M << " occurrences";
  return WitnessCertificate{SetF{symbol, M},
                            x.alphabet(),
                            prefix,
                            epsilon,
                            Sequence::eventually_periodic(x.alphabet(), prefix, Word{symbol}),
                            radius_of(forced),
                            PrefixForcedArgument{forced, reason.str()}};
}

Position nlc_gap_length(int L, const BoundFunction& bound, Position n) {
  const double p = bound(static_cast<Position>(L) * (n / L) + 1);
  if (!std::isfinite(p) || p > static_cast<double>(kMaxRadiusExponent)) {
    throw Error(ErrorCode::CapExceeded, "bound value too large for an exclusion radius");
  }
  // p may be fractional; rounding up only shrinks the ball.
  return static_cast<Position>(std::ceil(p)) + 2 * L + 2;
}

WitnessCertificate witness_NLc(const Sequence& x, int L, const BoundFunction& bound, Position n) {
  validate_set(SetNLc{L, bound}, x.alphabet());
  if (n < 0) throw Error(ErrorCode::DomainError, "prefix length must be nonnegative");
  const Position m = nlc_gap_length(L, bound, n);
  Word prefix = base_prefix(x, n);
  std::ostringstream reason;
  reason << "after the first " << n << " entries come " << m
         << " forced ones; any representation needs a gap block inside them longer than the bound";
  return WitnessCertificate{SetNLc{L, bound},
                            x.alphabet(),
                            prefix,
                            DyadicRadius{static_cast<std::uint32_t>(n)},
                            Sequence::eventually_periodic(x.alphabet(), prefix, Word{1}),
                            radius_of(n + m),
                            PrefixForcedArgument{n + m, reason.str()}};
}

Position weighted_horizon(const Sequence& y, int L, double M, const WeightFamily& weights,
                          std::size_t iteration_cap) {
  const auto g = greedy_partition(y, L, 0);
  const Interval threshold = Interval::point(M);
  Starts starts;
  Interval sum;
  for (std::size_t k = 1; k <= iteration_cap; ++k) {
    if (!g.proven_infinite() && k > g.block_count()) break;
    starts.push_back(g.start(k));
    const double f = weights(L, starts);
    if (!(f > 0)) throw Error(ErrorCode::NonpositiveWeight, "weight at block " + std::to_string(k));
    sum = sum + Interval::reciprocal_product(static_cast<double>(starts.back()), f);
    if (sum.certainly_gt(threshold)) return starts.back() + L;
  }
  throw Error(ErrorCode::DivergenceTooSlow,
              "weighted sum did not exceed the threshold within the iteration cap");
}

WitnessCertificate witness_A_weighted(const Sequence& x, double M, const WeightFamily& weights,
                                      DyadicRadius epsilon, std::size_t iteration_cap) {
  require_proper_epsilon(epsilon);
  const int n = x.alphabet().size();
  validate_set(SetWeightedA{n, M, weights}, x.alphabet());
  Word prefix = base_prefix(x, epsilon.exponent);
  Sequence y = dense_tail(x.alphabet(), prefix, 0);
  const Position m =
      std::max<Position>(weighted_horizon(y, n, M, weights, iteration_cap), epsilon.exponent);
  std::ostringstream reason;
  reason << "greedy blocks ending before " << m
         << " are shared by every ball member and their weighted sum exceeds M";
  return WitnessCertificate{SetWeightedA{n, M, weights},
                            x.alphabet(),
                            prefix,
                            epsilon,
                            std::move(y),
                            radius_of(m),
                            PrefixForcedArgument{m, reason.str()}};
}

// ---------------------------------------------------------------------------
// Verification

namespace {

// Whether every sequence starting with w lies outside the set. For the
// cumulative-gap sets this runs the exhaustive representation search when
// `exhaustive` is set.
bool prefix_excluded(std::span<const Symbol> w, const WitnessCertificate& cert, bool exhaustive) {
  const int n = cert.alphabet.size();
  return std::visit(
      [&](const auto& s) -> bool {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, SetB>) {
          return greedy_starts_in_word(w, n, s.L, s.k + 1).size() >= s.k + 1;
        } else if constexpr (std::is_same_v<T, SetF>) {
          return std::count(w.begin(), w.end(), s.n) >= s.M;
        } else if constexpr (std::is_same_v<T, SetNLc>) {
          if (exhaustive) return !search_representations(w, n, s.L, s.bound).feasible;
          const auto prefix = Sequence::prefix(cert.alphabet, Word(w.begin(), w.end()));
          return satisfies_P_Lc(prefix, s.L, s.bound).verdict == Verdict::ExcludedByPrefix;
        } else {
          const auto prefix = Sequence::prefix(cert.alphabet, Word(w.begin(), w.end()));
          return membership(prefix, s).verdict == Verdict::ExcludedByPrefix;
        }
      },
      cert.set);
}

// Tries the extension w followed by ones, which has an exact verdict.
std::optional<std::string> concrete_escape(const Word& w, const WitnessCertificate& cert) {
  const auto z = Sequence::eventually_periodic(cert.alphabet, w, Word{1});
  try {
    const auto report = membership(z, cert.set);
    if (report.verdict == Verdict::Member) {
      return "the extension followed by ones belongs to " + set_name(cert.set);
    }
  } catch (const Error&) {
  }
  return std::nullopt;
}

}  // namespace

VerificationReport verify_certificate(const WitnessCertificate& cert, const VerifyMode& mode,
                                      std::uint64_t enumeration_cap) {
  VerificationReport out;
  auto add = [&](std::string name, bool ok, std::string detail, bool informational = false) {
    out.checks.push_back({std::move(name), ok, informational, std::move(detail)});
  };
  validate_set(cert.set, cert.alphabet);
  if (cert.witness.alphabet() != cert.alphabet) {
    throw Error(ErrorCode::AlphabetMismatch, "witness alphabet differs from the certificate");
  }
  const auto j = static_cast<Position>(cert.epsilon.exponent);
  const auto forced = forced_prefix_length(cert.radius);

  const bool agrees = static_cast<Position>(cert.base_prefix.size()) == j &&
                      cert.witness.take(j) == cert.base_prefix;
  add("witness_within_epsilon", agrees,
      "witness agrees with the base prefix on the first " + std::to_string(j) + " entries");
  add("ball_within_epsilon", forced >= j,
      "exclusion radius 2^-" + std::to_string(forced) + " <= epsilon 2^-" + std::to_string(j));

  if (std::holds_alternative<SetA>(cert.set)) {
    // For dyadic epsilon = 2^-e, phi^{-1}(epsilon) = 2^{-e 2^e} exactly.
    const bool dominated = j <= static_cast<Position>(kMaxWitnessAExponent) &&
                           forced <= (j << j);
    add("radius_dominates_gauge", dominated, "2^-" + std::to_string(forced) + " >= phi^{-1}(epsilon)");
  }

  if (const auto* nlc = std::get_if<SetNLc>(&cert.set)) {
    // The analytic chain: the first gap block inside the ones has index at
    // most floor(n/L) + 2 and length at least m - 2(L - N + 1).
    const int L = nlc->L;
    const Position m = forced - j;
    const Position min_gap = m - 2 * (L - (cert.alphabet.size() - 1));
    const double worst = nlc->bound(j / L + 2);
    add("escape_gap_exceeds_bound", static_cast<double>(min_gap) > worst,
        "gap >= " + std::to_string(min_gap) + " vs bound " + std::to_string(worst) +
            " at the largest possible block index",
        true);
  }

  if (std::holds_alternative<PrefixForcedMode>(mode)) {
    const Word w = cert.witness.take(forced);
    const bool excluded = prefix_excluded(w, cert, false);
    add("forced_prefix_excludes", excluded,
        "every extension of the " + std::to_string(forced) + "-entry forced prefix lies outside " +
            set_name(cert.set));
  } else {
    const int extra = std::get<EnumerateMode>(mode).extra;
    if (!word_count(cert.alphabet.size(), static_cast<std::size_t>(std::max(extra, 0)), enumeration_cap)) {
      throw Error(ErrorCode::CapExceeded, "enumeration of ball prefixes exceeds the cap");
    }
    const auto prefixes = enumerate_ball_prefixes(cert.witness, cert.radius, extra, enumeration_cap);
    bool all = true;
    for (const Word& w : prefixes) {
      ++out.enumerated;
      if (!prefix_excluded(w, cert, true)) {
        all = false;
        out.counterexample = w;
        out.escape_note = concrete_escape(w, cert);
        break;
      }
    }
    add("enumerated_prefixes_exclude", all,
        std::to_string(out.enumerated) + " ball prefixes of length " +
            std::to_string(forced + extra) + " checked");
  }

  out.passed = std::all_of(out.checks.begin(), out.checks.end(),
                           [](const VerificationCheck& c) { return c.passed || c.informational; });
  return out;
}

}  // namespace pol
