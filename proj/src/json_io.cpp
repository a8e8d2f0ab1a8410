#include "pol/json_io.hpp"

#include <fstream>
#include <sstream>

namespace pol::json_io {

namespace {

[[noreturn]] void fail(const std::string& what) { throw Error(ErrorCode::ParseError, what); }

const Json& field(const Json& j, const char* key) {
  if (!j.is_object()) fail("expected an object");
  const auto it = j.find(key);
  if (it == j.end()) fail(std::string("missing field \"") + key + "\"");
  return *it;
}

template <class T>
T get(const Json& j, const char* key) {
  try {
    return field(j, key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    fail(std::string("field \"") + key + "\": " + e.what());
  }
}

template <class T>
T get_or(const Json& j, const char* key, T fallback) {
  return j.is_object() && j.contains(key) ? get<T>(j, key) : fallback;
}

Json rational_json(const Rational& q) {
  std::ostringstream os;
  os << q;
  return os.str();
}

Json starts_json(std::span<const Position> starts) { return Json(std::vector<Position>(starts.begin(), starts.end())); }

Json certificate_body(const Certificate& c) {
  Json j = Json::object();
  if (c.L) j["L"] = *c.L;
  if (!c.starts.empty()) j["starts"] = starts_json(c.starts);
  if (c.partial_sum) j["partial_sum"] = to_json(*c.partial_sum);
  if (c.eventual_gap) j["eventual_gap"] = *c.eventual_gap;
  if (c.missing) j["missing_symbol"] = *c.missing;
  if (c.violated_at) j["violated_at_block"] = *c.violated_at;
  j["reason"] = c.reason;
  return j;
}

}  // namespace

Json parse(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    fail(std::string("invalid JSON: ") + e.what());
  }
}

Json read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

// ---------------------------------------------------------------------------

Json to_json(const Sequence& x) {
  Json j;
  j["alphabet"] = x.alphabet().size();
  if (x.is_exact()) {
    j["transient"] = x.periodic_model().transient;
    j["period"] = x.periodic_model().period;
  } else {
    j["prefix"] = x.prefix_word();
  }
  return j;
}

Sequence sequence_from_json(const Json& j) {
  const Alphabet alphabet(get<int>(j, "alphabet"));
  if (j.contains("prefix")) {
    if (j.contains("period")) fail("a sequence has either \"prefix\" or \"period\", not both");
    return Sequence::prefix(alphabet, get<Word>(j, "prefix"));
  }
  return Sequence::eventually_periodic(alphabet, get_or<Word>(j, "transient", {}), get<Word>(j, "period"));
}

Json to_json(const Interval& v) { return Json{{"lo", v.lo}, {"hi", v.hi}}; }

Json to_json(const BoundFunction& p) {
  Json j{{"kind", p.kind()}};
  const auto& q = p.params();
  if (p.kind() == "linear" || p.kind() == "constant") {
    j["c"] = q.at(0);
  } else if (p.kind() == "affine") {
    j["a"] = q.at(0);
    j["b"] = q.at(1);
  } else if (p.kind() == "power") {
    j["c"] = q.at(0);
    j["base"] = q.at(1);
  }
  return j;
}

BoundFunction bound_from_json(const Json& j) {
  const auto kind = get<std::string>(j, "kind");
  if (kind == "linear") return BoundFunction::linear(get<double>(j, "c"));
  if (kind == "constant") return BoundFunction::constant(get<double>(j, "c"));
  if (kind == "affine") return BoundFunction::affine(get<double>(j, "a"), get<double>(j, "b"));
  if (kind == "power") return BoundFunction::power(get<double>(j, "c"), get<double>(j, "base"));
  fail("unknown bound kind \"" + kind + "\"");
}

WeightFamily weights_from_json(const Json& j) {
  const auto kind = j.is_string() ? j.get<std::string>() : get<std::string>(j, "kind");
  if (kind == "unit") return WeightFamily::unit();
  if (kind == "index") return WeightFamily::block_index();
  if (kind == "log_index") return WeightFamily::log_index();
  if (kind == "log_start") return WeightFamily::log_start();
  fail("unknown weight family \"" + kind + "\"");
}

Json to_json(const SetDescriptor& set) {
  return std::visit(
      [](const auto& s) -> Json {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, SetA>) {
          return Json{{"set", "A"}, {"L", s.L}, {"M", s.M}};
        } else if constexpr (std::is_same_v<T, SetB>) {
          return Json{{"set", "B"}, {"L", s.L}, {"k", s.k}};
        } else if constexpr (std::is_same_v<T, SetF>) {
          return Json{{"set", "F"}, {"n", s.n}, {"M", s.M}};
        } else if constexpr (std::is_same_v<T, SetNLc>) {
          return Json{{"set", "NLc"}, {"L", s.L}, {"bound", to_json(s.bound)}};
        } else {
          return Json{{"set", "Af"}, {"L", s.L}, {"M", s.M}, {"weights", s.weights.kind()}};
        }
      },
      set);
}

SetDescriptor set_from_json(const Json& j) {
  const auto name = get<std::string>(j, "set");
  if (name == "A") return SetA{get<int>(j, "L"), get<std::int64_t>(j, "M")};
  if (name == "B") return SetB{get<int>(j, "L"), get<std::size_t>(j, "k")};
  if (name == "F") return SetF{get<Symbol>(j, "n"), get<std::int64_t>(j, "M")};
  if (name == "NLc") return SetNLc{get<int>(j, "L"), bound_from_json(field(j, "bound"))};
  if (name == "Af") {
    return SetWeightedA{get<int>(j, "L"), get<double>(j, "M"), weights_from_json(field(j, "weights"))};
  }
  fail("unknown set \"" + name + "\"");
}

Json to_json(const ClassificationReport& report, const SetDescriptor& set) {
  Json j;
  j["set"] = to_json(set);
  j["verdict"] = std::string(to_string(report.verdict));
  j["certificate"] = certificate_body(report.certificate);
  if (report.certificate.threshold) j["threshold"] = to_json(*report.certificate.threshold);
  return j;
}

Json quasi_normal_json(const ClassificationReport& report) {
  Json j;
  j["property"] = "quasi_normal";
  j["verdict"] = std::string(to_string(report.verdict));
  j["certificate"] = certificate_body(report.certificate);
  return j;
}

Json to_json(const GreedyPartition& g) {
  Json j;
  j["L"] = g.block_length;
  j["starts"] = starts_json(g.starts);
  Json status;
  std::visit(
      [&](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, ProvenInfinite>) {
          status = Json{{"kind", "ProvenInfinite"},
                        {"eventual_gap", s.eventual_gap},
                        {"preperiod_blocks", s.preperiod_blocks},
                        {"cycle_blocks", s.cycle_blocks},
                        {"cycle_span", s.cycle_span}};
        } else if constexpr (std::is_same_v<T, ExistsUpToBlock>) {
          status = Json{{"kind", "ExistsUpToBlock"}, {"k", s.k}};
        } else {
          status = Json{{"kind", "UndeterminedBeyondHorizon"}, {"horizon", s.horizon}};
        }
      },
      g.status);
  j["status"] = status;
  Json sums = Json::array();
  Interval running;
  for (Position r : g.starts) {
    running = running + Interval::reciprocal(r);
    sums.push_back(to_json(running));
  }
  j["partial_sums"] = sums;
  j["exact_sum"] = rational_json(partial_sum(g.starts, g.starts.size()));
  return j;
}

// ---------------------------------------------------------------------------

Json to_json(const WitnessCertificate& cert) {
  Json j;
  j["set"] = to_json(cert.set);
  j["alphabet"] = cert.alphabet.size();
  j["epsilon_exp"] = cert.epsilon.exponent;
  j["base_prefix"] = cert.base_prefix;
  j["witness"] = to_json(cert.witness);
  j["radius_exp"] = cert.radius.exponent;
  std::visit(
      [&](const auto& a) {
        using T = std::decay_t<decltype(a)>;
        if constexpr (std::is_same_v<T, PrefixForcedArgument>) {
          j["argument"] = Json{{"kind", "PrefixForced"}, {"forced_len", a.forced_len}, {"reason", a.reason}};
        } else {
          j["argument"] = Json{{"kind", "Enumerated"}, {"count", a.count}};
        }
      },
      cert.argument);
  return j;
}

WitnessCertificate certificate_from_json(const Json& j) {
  const Alphabet alphabet(get<int>(j, "alphabet"));
  const Json& arg = field(j, "argument");
  WitnessArgument argument;
  const auto kind = get<std::string>(arg, "kind");
  if (kind == "PrefixForced") {
    argument = PrefixForcedArgument{get<Position>(arg, "forced_len"), get_or<std::string>(arg, "reason", "")};
  } else if (kind == "Enumerated") {
    argument = EnumeratedArgument{get<std::uint64_t>(arg, "count")};
  } else {
    fail("unknown argument kind \"" + kind + "\"");
  }
  return WitnessCertificate{set_from_json(field(j, "set")),
                            alphabet,
                            get<Word>(j, "base_prefix"),
                            DyadicRadius{get<std::uint32_t>(j, "epsilon_exp")},
                            sequence_from_json(field(j, "witness")),
                            DyadicRadius{get<std::uint32_t>(j, "radius_exp")},
                            std::move(argument)};
}

Json to_json(const VerificationReport& report) {
  Json j;
  j["passed"] = report.passed;
  Json checks = Json::array();
  for (const auto& c : report.checks) {
    checks.push_back(Json{{"name", c.name},
                          {"passed", c.passed},
                          {"informational", c.informational},
                          {"detail", c.detail}});
  }
  j["checks"] = checks;
  j["enumerated"] = report.enumerated;
  j["counterexample"] = report.counterexample ? Json(*report.counterexample) : Json(nullptr);
  if (report.escape_note) j["escape"] = *report.escape_note;
  return j;
}

// ---------------------------------------------------------------------------

SubspaceSystem system_from_json(const Json& j) {
  const auto dim = get<Eigen::Index>(j, "dim");
  const auto raw = get<std::vector<std::vector<std::vector<double>>>>(j, "subspaces");
  std::vector<std::vector<Vector>> spanning;
  for (const auto& subspace : raw) {
    auto& vs = spanning.emplace_back();
    for (const auto& v : subspace) {
      if (static_cast<Eigen::Index>(v.size()) != dim) {
        throw Error(ErrorCode::DimensionMismatch, "spanning vector of length " +
                                                      std::to_string(v.size()) + " in dimension " +
                                                      std::to_string(dim));
      }
      vs.push_back(Eigen::Map<const Vector>(v.data(), dim));
    }
  }
  return SubspaceSystem::from_spanning(dim, spanning);
}

Json to_json(const SubspaceSystem& system) {
  Json subspaces = Json::array();
  for (Symbol n = 1; n <= system.size(); ++n) {
    const Matrix& b = system.basis(n);
    Json cols = Json::array();
    for (Eigen::Index c = 0; c < b.cols(); ++c) {
      cols.push_back(std::vector<double>(b.col(c).data(), b.col(c).data() + b.rows()));
    }
    subspaces.push_back(cols);
  }
  return Json{{"dim", system.dim()}, {"subspaces", subspaces}};
}

// ---------------------------------------------------------------------------

GeneratorSpec generator_from_json(const Json& j) {
  const auto kind = get<std::string>(j, "generator");
  if (kind == "Periodic") return PeriodicSpec{get<Word>(j, "pattern")};
  if (kind == "QuasiPeriodic") {
    return QuasiPeriodicSpec{get<Position>(j, "m"), get_or<std::uint64_t>(j, "seed", 0)};
  }
  if (kind == "IidUniform") {
    return IidUniformSpec{get_or<std::uint64_t>(j, "seed", 0), get_or<Position>(j, "length", 0)};
  }
  if (kind == "AdversarialRuns") {
    RunGrowth growth;
    const Json& g = field(j, "growth");
    const auto gk = get<std::string>(g, "kind");
    if (gk == "exponential") {
      growth.kind = RunGrowth::Kind::Exponential;
      growth.base = get_or<double>(g, "base", 2.0);
    } else if (gk == "linear") {
      growth.kind = RunGrowth::Kind::Linear;
      growth.offset = get_or<double>(g, "offset", 1.0);
      growth.slope = get_or<double>(g, "slope", 1.0);
    } else {
      fail("unknown growth kind \"" + gk + "\"");
    }
    return AdversarialRunsSpec{growth, get_or<Position>(j, "length", 0)};
  }
  if (kind == "PcBounded") {
    return PcBoundedSpec{get<int>(j, "L"), bound_from_json(field(j, "bound")),
                         get_or<std::uint64_t>(j, "seed", 0), get_or<Position>(j, "length", 0)};
  }
  fail("unknown generator \"" + kind + "\"");
}

Json to_json(const GeneratorSpec& spec) {
  return std::visit(
      [](const auto& s) -> Json {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, PeriodicSpec>) {
          return Json{{"generator", "Periodic"}, {"pattern", s.pattern}};
        } else if constexpr (std::is_same_v<T, QuasiPeriodicSpec>) {
          return Json{{"generator", "QuasiPeriodic"}, {"m", s.m}, {"seed", s.seed}};
        } else if constexpr (std::is_same_v<T, IidUniformSpec>) {
          return Json{{"generator", "IidUniform"}, {"seed", s.seed}, {"length", s.length}};
        } else if constexpr (std::is_same_v<T, AdversarialRunsSpec>) {
          Json g = s.growth.kind == RunGrowth::Kind::Exponential
                       ? Json{{"kind", "exponential"}, {"base", s.growth.base}}
                       : Json{{"kind", "linear"}, {"offset", s.growth.offset}, {"slope", s.growth.slope}};
          return Json{{"generator", "AdversarialRuns"}, {"growth", g}, {"length", s.length}};
        } else {
          return Json{{"generator", "PcBounded"}, {"L", s.L}, {"bound", to_json(s.bound)},
                      {"seed", s.seed}, {"length", s.length}};
        }
      },
      spec);
}

Json to_json(const RateRow& row) {
  return Json{{"spec_id", row.spec_id},
              {"trials", row.trials},
              {"bounded_density_rate", row.bounded_density_rate},
              {"excluded_from_A_rate", row.excluded_from_A_rate},
              {"mean_late_gap", row.mean_late_gap}};
}

}  // namespace pol::json_io
