// Acceptance run: one PASS/FAIL line per criterion. Exit status is nonzero
// when any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <thread>

#include "pol/classify.hpp"
#include "pol/generators.hpp"
#include "pol/hilbert.hpp"
#include "pol/partition.hpp"
#include "pol/porosity.hpp"
#include "pol/rng.hpp"

using namespace pol;
using Clock = std::chrono::steady_clock;

namespace {

// Pinned tolerances and limits.
constexpr double kGaugeRoundTripTol = 1e-12;
constexpr double kMapDistanceTol = 1e-6;
constexpr std::size_t kMapMaxProjections = 100'000;
constexpr double kDecayRelativeTol = 1e-10;
constexpr double kIidMinRate = 0.99;
constexpr double kAdversarialMaxRate = 0.01;
constexpr std::uint64_t kEnumerationWordCap = 1'000'000;
constexpr double kGreedyExhaustBudgetSeconds = 60.0;
constexpr double kGreedyLimitSeconds = 300.0;
constexpr double kEscapeLimitSeconds = 120.0;
constexpr double kGenericityLimitSeconds = 300.0;

struct Outcome {
  bool passed = false;
  std::string detail;
};

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string word_text(const Word& w) {
  std::string s = "(";
  for (std::size_t i = 0; i < w.size(); ++i) s += (i ? "," : "") + std::to_string(w[i]);
  return s + ")";
}

// --- 1 -----------------------------------------------------------------------

// Reciprocal sums scaled by lcm(1..12) are exact integers for starts <= 12.
constexpr std::int64_t kLcm12 = 27720;

std::int64_t scaled_sum(const Starts& s) {
  std::int64_t total = 0;
  for (Position r : s) total += kLcm12 / r;
  return total;
}

// Violations of pointwise minimality or sum maximality for one word.
std::size_t greedy_violations(const Word& w, std::size_t& partitions) {
  const Starts greedy = greedy_starts_in_word(w, 3, 3);
  const std::int64_t greedy_sum = scaled_sum(greedy);
  std::size_t bad = 0;
  for (const Starts& other : enumerate_valid_partitions(w, 3, 3)) {
    ++partitions;
    bool ok = other.size() <= greedy.size() && scaled_sum(other) <= greedy_sum;
    for (std::size_t k = 0; ok && k < other.size(); ++k) ok = greedy[k] <= other[k];
    bad += !ok;
  }
  return bad;
}

Outcome greedy_optimality() {
  const auto start = Clock::now();
  std::size_t words = 0, partitions = 0, violations = 0;
  bool exhausted = true;
  for_each_word(3, 12, [&](const Word& w) {
    if (!exhausted) return;
    violations += greedy_violations(w, partitions);
    ++words;
    if ((words & 0xFFF) == 0 && seconds_since(start) > kGreedyExhaustBudgetSeconds) exhausted = false;
  });
  std::string mode = "exhaustive 3^12";
  if (!exhausted) {
    mode = "seeded sample of 10^5 (exhaustion exceeded 60 s)";
    words = partitions = violations = 0;
    SplitMix64 rng(20240601);
    Word w(12);
    for (int i = 0; i < 100'000; ++i) {
      for (auto& s : w) s = static_cast<Symbol>(rng.uniform_int(1, 3));
      violations += greedy_violations(w, partitions);
      ++words;
    }
  }
  const double elapsed = seconds_since(start);
  std::ostringstream os;
  os << mode << ", " << words << " words, " << partitions << " valid partitions, " << violations
     << " violations, " << elapsed << " s";
  return {violations == 0 && elapsed <= kGreedyLimitSeconds, os.str()};
}

// --- 2 -----------------------------------------------------------------------

Outcome ball_identity() {
  std::size_t checked = 0, mismatches = 0;
  for (int n = 1; n <= 3; ++n) {
    for (std::uint32_t j = 0; j <= 5; ++j) {
      const double radius = std::ldexp(1.0, -static_cast<int>(j));
      // Every length-j word, extended by a constant tail, serves as a center.
      for_each_word(n, j, [&](const Word& head) {
        const auto center = Sequence::eventually_periodic(Alphabet(n), head, {n});
        const Word forced = center.take(j);
        for_each_word(n, j + 2, [&](const Word& w) {
          double d = 0.0;
          for (Position i = 1; i <= static_cast<Position>(j + 2); ++i) {
            if (w[static_cast<std::size_t>(i - 1)] != center.at(i))
              d = std::max(d, std::ldexp(1.0, -static_cast<int>(i)));
          }
          const bool by_metric = d < radius;
          const bool agrees = std::equal(forced.begin(), forced.end(), w.begin());
          const bool by_library = in_ball(center, DyadicRadius{j}, Sequence::prefix(Alphabet(n), w));
          mismatches += (by_metric != agrees) + (by_library != agrees);
          ++checked;
        });
      });
    }
  }
  std::ostringstream os;
  os << checked << " (center, word) pairs, " << mismatches << " mismatches";
  return {mismatches == 0, os.str()};
}

// --- 3 -----------------------------------------------------------------------

Outcome gauge() {
  const bool unit = phi_inverse(1.0) == 1.0;
  double worst = 0.0;
  constexpr double lo = 1e-6, hi = 1.0 - 1e-6;
  for (int i = 1; i <= 1000; ++i) {
    const double t = lo + (hi - lo) * i / 1001.0;
    // phi^{-1}(t) underflows below t ~ 1e-3, so compose through its log.
    worst = std::max(worst, std::abs(phi_of_log(phi_inverse_log(t)) - t));
    const double direct = phi_inverse(t);
    if (direct >= std::numeric_limits<double>::min()) worst = std::max(worst, std::abs(phi(direct) - t));
  }
  std::size_t concave_points = 0;
  const double h = (1.0 / 3.0) / 1001.0;
  for (int i = 1; i <= 999; ++i) {
    const double t = (i + 1) * h;
    if (phi_inverse(t + h) - 2 * phi_inverse(t) + phi_inverse(t - h) < 0.0) ++concave_points;
  }
  std::ostringstream os;
  os << "phi^{-1}(1) " << (unit ? "== 1" : "!= 1") << ", worst round trip " << worst
     << ", negative second differences " << concave_points;
  return {unit && worst <= kGaugeRoundTripTol && concave_points == 0, os.str()};
}

// --- 4 -----------------------------------------------------------------------

struct CertificateTally {
  std::size_t issued = 0;
  std::size_t forced_failures = 0;
  std::size_t enumerated = 0;
  std::size_t enumerate_failures = 0;
  std::size_t refused = 0;  // documented precondition refusals
  std::size_t errors = 0;   // anything else thrown
  std::string first_failure;
};

void check_certificate(CertificateTally& tally, const std::function<WitnessCertificate()>& make,
                       std::optional<ErrorCode> allowed_refusal = std::nullopt) {
  std::optional<WitnessCertificate> cert;
  try {
    cert = make();
  } catch (const Error& e) {
    if (allowed_refusal && e.code() == *allowed_refusal) {
      ++tally.refused;
    } else {
      ++tally.errors;
      if (tally.first_failure.empty()) tally.first_failure = e.what();
    }
    return;
  }
  ++tally.issued;
  const std::string name = set_name(cert->set) + " base " + word_text(cert->base_prefix);
  if (!verify_certificate(*cert, PrefixForcedMode{}).passed) {
    ++tally.forced_failures;
    if (tally.first_failure.empty()) tally.first_failure = "PrefixForced " + name;
  }
  const auto words = word_count(cert->alphabet.size(), 2, kEnumerationWordCap);
  if (words) {
    ++tally.enumerated;
    if (!verify_certificate(*cert, EnumerateMode{2}, kEnumerationWordCap).passed) {
      ++tally.enumerate_failures;
      if (tally.first_failure.empty()) tally.first_failure = "Enumerate " + name;
    }
  }
}

Outcome witness_certificates() {
  CertificateTally grid;
  CertificateTally a_admissible;
  for (int n = 2; n <= 3; ++n) {
    const Alphabet alphabet(n);
    for (std::uint32_t j = 1; j <= 4; ++j) {
      for_each_word(n, j, [&](const Word& w) {
        const auto x = Sequence::prefix(alphabet, w);
        const DyadicRadius eps{j};
        for (std::int64_t M = 1; M <= 3; ++M) {
          check_certificate(grid, [&] { return witness_A(x, M, eps); }, ErrorCode::EpsilonTooLarge);
          for (Symbol s = 1; s <= n; ++s) check_certificate(grid, [&] { return witness_F(x, s, M, eps); });
        }
        for (std::size_t k = 0; k <= 2; ++k) check_certificate(grid, [&] { return witness_B(x, k, eps); });
        for (double c : {1.0, 2.0}) {
          const auto p = BoundFunction::linear(c);
          // witness_NLc applies to bases not already excluded from the set.
          if (!search_representations(w, n, n, p).feasible) continue;
          check_certificate(grid, [&] { return witness_NLc(x, n, p, j); });
        }
      });
    }
    // witness_A refuses every j <= 4; cover it at its smallest admissible exponents.
    for (std::int64_t M = 1; M <= 3; ++M) {
      const std::uint32_t e0 = witness_A_min_exponent(n, M);
      for (std::uint32_t e : {e0, e0 + 1}) {
        SplitMix64 rng(1000 * static_cast<std::uint64_t>(n) + 10 * static_cast<std::uint64_t>(M) + e);
        for (int sample = 0; sample < 3; ++sample) {
          Word w(e);
          for (auto& s : w) s = static_cast<Symbol>(rng.uniform_int(1, n));
          check_certificate(a_admissible, [&] { return witness_A(Sequence::prefix(alphabet, w), M, DyadicRadius{e}); });
        }
      }
    }
  }
  const auto failures = [](const CertificateTally& t) { return t.forced_failures + t.enumerate_failures + t.errors; };
  std::ostringstream os;
  os << "j<=4 grid: " << grid.issued << " certificates, " << grid.forced_failures << " PrefixForced and "
     << grid.enumerate_failures << " Enumerate failures over " << grid.enumerated << " enumerations, "
     << grid.errors << " errors, " << grid.refused << " witness_A refusals (epsilon >= epsilon_0)"
     << "; witness_A at admissible epsilon: " << a_admissible.issued << " certificates, " << failures(a_admissible)
     << " failures";
  if (!grid.first_failure.empty()) os << "; first failure " << grid.first_failure;
  if (!a_admissible.first_failure.empty()) os << "; first A failure " << a_admissible.first_failure;
  return {failures(grid) == 0 && failures(a_admissible) == 0 && grid.issued > 0, os.str()};
}

// --- 5 -----------------------------------------------------------------------

Outcome nlc_escape() {
  const auto start = Clock::now();
  const auto p = BoundFunction::linear(2);
  std::size_t failures = 0;
  std::string first;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const Position n = 1 + static_cast<Position>((seed - 1) % 12);
    const auto source = generate(PcBoundedSpec{3, p, seed, 12}, Alphabet(3));
    const auto x = Sequence::prefix(Alphabet(3), source.take(n));
    const auto cert = witness_NLc(x, 3, p, n);
    const Word forced = cert.witness.take(cert.radius.exponent);
    const bool escaped = !search_representations(forced, 3, 3, p).feasible;
    const bool verified = verify_certificate(cert, PrefixForcedMode{}).passed;
    if (!escaped || !verified) {
      ++failures;
      if (first.empty()) first = "seed " + std::to_string(seed) + " n " + std::to_string(n);
    }
  }
  const double elapsed = seconds_since(start);
  std::ostringstream os;
  os << "20 prefixes, " << failures << " admit a representation in the ball, " << elapsed << " s";
  if (!first.empty()) os << "; first " << first;
  return {failures == 0 && elapsed <= kEscapeLimitSeconds, os.str()};
}

// --- 6 -----------------------------------------------------------------------

Vector random_vector(SplitMix64& rng, Eigen::Index dim) {
  Vector v(dim);
  for (Eigen::Index i = 0; i < dim; ++i) v(i) = rng.normal();
  return v;
}

struct MapTally {
  std::size_t runs = 0;
  std::size_t failures = 0;
  double worst = 0.0;
  std::size_t most_steps = 0;
  std::string first_failure;
};

// Smallest nonzero principal angle between C_1 and C_2, ignoring directions
// in the intersection. Alternating projections contract by cos^2 of it per sweep.
double friedrichs_angle(const SubspaceSystem& system) {
  const Eigen::JacobiSVD<Matrix> svd(system.basis(1).transpose() * system.basis(2));
  for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i) {
    const double c = svd.singularValues()(i);
    if (c < 1.0 - 1e-10) return std::acos(c);
  }
  return std::numbers::pi / 2;
}

void run_one(MapTally& tally, const SubspaceSystem& system, const Sequence& order, const Vector& xi0,
             std::uint64_t seed) {
  StopRule stop;
  stop.tol = kMapDistanceTol;
  stop.max_iters = kMapMaxProjections;
  const auto t = run_map(system, order, xi0, stop);
  const double d = (t.final_iterate - t.target).norm();
  ++tally.runs;
  tally.worst = std::max(tally.worst, d);
  tally.most_steps = std::max(tally.most_steps, t.steps);
  if (!(d <= kMapDistanceTol) || t.steps > kMapMaxProjections) {
    ++tally.failures;
    if (tally.first_failure.empty()) {
      std::ostringstream os;
      os << "system seed " << seed << ", d=" << system.dim() << ", distance " << d << " after " << t.steps
         << " projections";
      if (system.size() == 2) os << ", Friedrichs angle " << friedrichs_angle(system) << " rad";
      tally.first_failure = os.str();
    }
  }
}

Outcome map_convergence() {
  MapTally cyclic, alternating, quasi_periodic;
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    const Eigen::Index dim = 2 + static_cast<Eigen::Index>(seed % 9);
    SplitMix64 rng(seed * 7919);
    run_one(cyclic, random_system(dim, 3, seed), Sequence::periodic(Alphabet(3), {1, 2, 3}),
            random_vector(rng, dim), seed);
    run_one(alternating, random_system(dim, 2, seed + 500), Sequence::periodic(Alphabet(2), {1, 2}),
            random_vector(rng, dim), seed + 500);
  }
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const Eigen::Index dim = 2 + static_cast<Eigen::Index>(seed % 9);
    const Position m = 3 + static_cast<Position>(seed % 4);
    SplitMix64 rng(seed * 104729);
    run_one(quasi_periodic, random_system(dim, 3, seed + 1000), generate(QuasiPeriodicSpec{m, seed}, Alphabet(3)),
            random_vector(rng, dim), seed + 1000);
  }
  std::ostringstream os;
  for (const auto& [name, t] : {std::pair{"cyclic N=3", &cyclic}, std::pair{"alternating N=2", &alternating},
                                std::pair{"quasi-periodic m<=6", &quasi_periodic}}) {
    os << name << ": " << t->failures << "/" << t->runs << " failed, worst " << t->worst << ", max steps "
       << t->most_steps;
    if (!t->first_failure.empty()) os << " (" << t->first_failure << ")";
    os << "; ";
  }
  const bool ok = cyclic.failures + alternating.failures + quasi_periodic.failures == 0;
  std::string detail = os.str();
  detail.resize(detail.size() - 2);
  return {ok, detail};
}

// --- 7 -----------------------------------------------------------------------

Outcome closed_form_decay() {
  const double c = std::cos(std::numbers::pi / 4), s = std::sin(std::numbers::pi / 4);
  Vector line1(2), line2(2);
  line1 << 1, 0;
  line2 << c, s;
  const auto system = SubspaceSystem::from_spanning(2, {{line1}, {line2}});
  // xi_0 on the second line, so each sweep (P_1 then P_2) scales by cos^2 = 1/2.
  const Vector xi0 = 3.0 * line2;
  StopRule stop;
  stop.tol = 0.0;
  stop.max_iters = 80;
  const auto t = run_map(system, Sequence::periodic(Alphabet(2), {1, 2}), xi0, stop);
  // Direct iteration with explicit projector matrices.
  Matrix p1(2, 2), p2(2, 2);
  p1 << 1, 0, 0, 0;
  p2 << c * c, c * s, c * s, s * s;
  Vector direct = xi0;
  double worst_closed = 0.0, worst_direct = 0.0;
  bool complete = t.log.size() == 81;
  for (int n = 1; complete && n <= 40; ++n) {
    direct = p2 * (p1 * direct);
    const double expected = std::ldexp(xi0.norm(), -n);
    const double got = t.log[static_cast<std::size_t>(2 * n)].distance_to_target;
    worst_closed = std::max(worst_closed, std::abs(got - expected) / expected);
    worst_direct = std::max(worst_direct, std::abs(direct.norm() - expected) / expected);
  }
  std::ostringstream os;
  os << "n<=40, worst relative error " << worst_closed << " (direct iteration oracle " << worst_direct << ")";
  return {complete && worst_closed <= kDecayRelativeTol && worst_direct <= kDecayRelativeTol, os.str()};
}

// --- 8 -----------------------------------------------------------------------

Outcome classification_coherence() {
  SplitMix64 rng(8);
  std::size_t inconsistent = 0, unsound = 0, quasi_normal = 0;
  std::string first;
  for (int trial = 0; trial < 100; ++trial) {
    Word transient(static_cast<std::size_t>(rng.uniform_int(0, 8)));
    Word period(static_cast<std::size_t>(rng.uniform_int(1, 8)));
    for (auto& v : transient) v = static_cast<Symbol>(rng.uniform_int(1, 3));
    for (auto& v : period) v = static_cast<Symbol>(rng.uniform_int(1, 3));
    const auto x = Sequence::eventually_periodic(Alphabet(3), transient, period);
    const bool qn = is_quasi_normal(x).verdict == Verdict::Member;
    bool in_some_set = false;
    for (std::int64_t M = 1; M <= 1000 && !in_some_set; ++M)
      in_some_set = membership(x, SetA{3, M}).verdict != Verdict::NonMember;
    for (std::size_t k = 0; k <= 10 && !in_some_set; ++k)
      in_some_set = membership(x, SetB{3, k}).verdict != Verdict::NonMember;
    quasi_normal += qn;
    if (qn == in_some_set) {
      ++inconsistent;
      if (!qn) ++unsound;
      if (first.empty()) first = word_text(transient) + word_text(period) + (qn ? " quasi-normal" : " not quasi-normal");
    }
  }
  std::ostringstream os;
  os << "100 sequences, " << quasi_normal << " quasi-normal, " << inconsistent << " inconsistencies ("
     << unsound << " non-quasi-normal outside every A{3,M} and B{3,k}; the rest quasi-normal only for some L > 3)";
  if (!first.empty()) os << "; first " << first;
  return {inconsistent == 0, os.str()};
}

// --- 9 -----------------------------------------------------------------------

Outcome empirical_genericity() {
  const auto start = Clock::now();
  RateOptions options;
  options.trials = 1000;
  options.horizon = 10'000;
  options.L = 3;
  options.seed = 9;
  options.jobs = std::max(1u, std::thread::hardware_concurrency());
  const auto iid = empirical_class_rates("iid", IidUniformSpec{0, options.horizon}, Alphabet(3), options);
  const auto runs =
      empirical_class_rates("runs", AdversarialRunsSpec{RunGrowth{}, options.horizon}, Alphabet(3), options);
  const double elapsed = seconds_since(start);
  std::ostringstream os;
  os << "IidUniform bounded-density rate " << iid.bounded_density_rate << ", AdversarialRuns "
     << runs.bounded_density_rate << ", " << elapsed << " s";
  return {iid.bounded_density_rate >= kIidMinRate && runs.bounded_density_rate <= kAdversarialMaxRate &&
              elapsed <= kGenericityLimitSeconds,
          os.str()};
}

}  // namespace

int main() {
  const std::pair<const char*, Outcome (*)()> criteria[] = {
      {"greedy optimality", greedy_optimality},
      {"ball identity", ball_identity},
      {"phi gauge", gauge},
      {"witness certificates", witness_certificates},
      {"cumulative-gap escape", nlc_escape},
      {"MAP convergence", map_convergence},
      {"closed-form decay", closed_form_decay},
      {"classification coherence", classification_coherence},
      {"empirical genericity", empirical_genericity},
  };
  int failed = 0;
  int index = 0;
  for (const auto& [name, check] : criteria) {
    ++index;
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    failed += !o.passed;
    std::printf("%s %d %s: %s\n", o.passed ? "PASS" : "FAIL", index, name, o.detail.c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
