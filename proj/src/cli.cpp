#include "pol/cli.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "pol/json_io.hpp"
#include "pol/rng.hpp"

namespace pol::cli {

namespace {

using json_io::Json;

Json json_arg(const std::string& text) {
  // Inline JSON or a path to a JSON file.
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && (text[first] == '{' || text[first] == '[')) {
    return json_io::parse(text);
  }
  return json_io::read_file(text);
}

Vector parse_vector(const std::string& arg) {
  std::string text = arg;
  if (std::filesystem::is_regular_file(arg)) {
    std::ifstream in(arg);
    std::stringstream buf;
    buf << in.rdbuf();
    text = buf.str();
  }
  std::vector<double> values;
  std::string token;
  std::stringstream ss(text);
  while (std::getline(ss, token, ',')) {
    const auto b = token.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) continue;
    try {
      std::size_t used = 0;
      values.push_back(std::stod(token.substr(b), &used));
    } catch (const std::exception&) {
      throw Error(ErrorCode::ParseError, "not a number in vector: \"" + token + "\"");
    }
  }
  return Eigen::Map<const Vector>(values.data(), static_cast<Eigen::Index>(values.size()));
}

std::string timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

ClassifyOptions classify_options(const Config& c) {
  return ClassifyOptions{c.cross_check_terms, c.search_cap, c.iteration_cap};
}

WitnessCertificate make_witness(const SetDescriptor& set, const Sequence& x, std::uint32_t e,
                                const Config& config) {
  const int n = x.alphabet().size();
  auto require_alphabet_blocks = [n](int L) {
    if (L != n) {
      throw Error(ErrorCode::DomainError, "this witness uses blocks of length N = " + std::to_string(n));
    }
  };
  const DyadicRadius eps{e};
  return std::visit(
      [&](const auto& s) -> WitnessCertificate {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, SetA>) {
          require_alphabet_blocks(s.L);
          return witness_A(x, s.M, eps);
        } else if constexpr (std::is_same_v<T, SetB>) {
          require_alphabet_blocks(s.L);
          return witness_B(x, s.k, eps);
        } else if constexpr (std::is_same_v<T, SetF>) {
          return witness_F(x, s.n, s.M, eps);
        } else if constexpr (std::is_same_v<T, SetNLc>) {
          return witness_NLc(x, s.L, s.bound, e);
        } else {
          require_alphabet_blocks(s.L);
          return witness_A_weighted(x, s.M, s.weights, eps, config.iteration_cap);
        }
      },
      set);
}

// Generated prefixes must reach the horizon.
GeneratorSpec with_length(GeneratorSpec spec, Position horizon) {
  std::visit(
      [horizon](auto& s) {
        if constexpr (requires { s.length; }) s.length = std::max(s.length, horizon);
      },
      spec);
  return spec;
}

}  // namespace

Config load_config(const std::string& path) {
  const Json j = json_io::read_file(path);
  Config c;
  try {
    c.enumeration_cap = j.value("enumeration_cap", c.enumeration_cap);
    c.cross_check_terms = j.value("cross_check_terms", c.cross_check_terms);
    c.search_cap = j.value("search_cap", c.search_cap);
    c.iteration_cap = j.value("iteration_cap", c.iteration_cap);
    c.max_dimension = j.value("max_dimension", c.max_dimension);
    c.max_iters = j.value("max_iters", c.max_iters);
    c.log_stride = j.value("log_stride", c.log_stride);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("config: ") + e.what());
  }
  if (j.contains("rng") && j["rng"] != SplitMix64::kAlgorithm) {
    throw Error(ErrorCode::ParseError, "config names an unsupported generator");
  }
  return c;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err,
        std::optional<std::uint64_t> seed_override) {
  CLI::App app{"Projection-order sequences: classification, porosity witnesses and alternating projections"};
  app.require_subcommand(1, 1);

  std::string config_path;
  bool no_timestamp = false;
  unsigned jobs = 1;
  app.add_option("--config", config_path, "JSON file with caps")->check(CLI::ExistingFile);
  app.add_flag("--no-timestamp", no_timestamp, "omit timestamps for byte-identical output");
  app.add_option("--jobs", jobs, "worker threads for experiments")->check(CLI::PositiveNumber);

  std::string seq_path, set_arg, cert_path, system_path, order_path, xi0_arg, spec_path, out_dir;
  int block_length = 0;
  std::size_t max_blocks = 16;
  std::uint32_t epsilon_exp = 0;
  int enumerate_extra = -1;
  double tol = 1e-10;
  std::size_t max_iters = 0;
  std::size_t trials = 0;
  Position horizon = 0;

  auto* classify = app.add_subcommand("classify", "classify a sequence (quasi-normality or set membership)");
  classify->add_option("--seq", seq_path, "sequence JSON file")->required();
  classify->add_option("--set", set_arg, "set descriptor (inline JSON or file)");

  auto* partition = app.add_subcommand("partition", "greedy L-partition report");
  partition->add_option("--seq", seq_path, "sequence JSON file")->required();
  partition->add_option("--L", block_length, "block length")->required();
  partition->add_option("--max-blocks", max_blocks, "number of starts to list");

  auto* witness = app.add_subcommand("witness", "porosity witness certificate");
  witness->add_option("--set", set_arg, "set descriptor (inline JSON or file)")->required();
  witness->add_option("--seq", seq_path, "base sequence JSON file")->required();
  witness->add_option("--epsilon-exp", epsilon_exp, "epsilon = 2^-e (prefix length n for NLc)")->required();

  auto* verify = app.add_subcommand("verify", "verify a witness certificate");
  verify->add_option("--cert", cert_path, "certificate JSON file")->required();
  verify->add_option("--enumerate", enumerate_extra, "enumerate ball prefixes with this many free entries")
      ->check(CLI::NonNegativeNumber);

  auto* simulate = app.add_subcommand("simulate", "run alternating projections");
  simulate->add_option("--system", system_path, "subspace system JSON file")->required();
  simulate->add_option("--order", order_path, "order sequence JSON file")->required();
  simulate->add_option("--xi0", xi0_arg, "starting vector (CSV or CSV file)")->required();
  simulate->add_option("--tol", tol, "distance to the target at which to stop");
  simulate->add_option("--max-iters", max_iters, "projection cap");

  auto* experiment = app.add_subcommand("experiment", "empirical class rates");
  experiment->add_option("--spec", spec_path, "experiment JSON file")->required();
  experiment->add_option("--trials", trials, "trials per family")->required();
  experiment->add_option("--horizon", horizon, "prefix length")->required();
  experiment->add_option("--out", out_dir, "output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    const Config config = config_path.empty() ? Config{} : load_config(config_path);

    if (classify->parsed()) {
      const Sequence x = json_io::sequence_from_json(json_io::read_file(seq_path));
      if (set_arg.empty()) {
        out << json_io::quasi_normal_json(is_quasi_normal(x)).dump(2) << "\n";
      } else {
        const SetDescriptor set = json_io::set_from_json(json_arg(set_arg));
        out << json_io::to_json(membership(x, set, classify_options(config)), set).dump(2) << "\n";
      }
      return kOk;
    }

    if (partition->parsed()) {
      const Sequence x = json_io::sequence_from_json(json_io::read_file(seq_path));
      out << json_io::to_json(greedy_partition(x, block_length, max_blocks)).dump(2) << "\n";
      return kOk;
    }

    if (witness->parsed()) {
      const Sequence x = json_io::sequence_from_json(json_io::read_file(seq_path));
      const SetDescriptor set = json_io::set_from_json(json_arg(set_arg));
      out << json_io::to_json(make_witness(set, x, epsilon_exp, config)).dump(2) << "\n";
      return kOk;
    }

    if (verify->parsed()) {
      const auto cert = json_io::certificate_from_json(json_io::read_file(cert_path));
      VerifyMode mode = PrefixForcedMode{};
      if (enumerate_extra >= 0) mode = EnumerateMode{enumerate_extra};
      const auto report = verify_certificate(cert, mode, config.enumeration_cap);
      out << json_io::to_json(report).dump(2) << "\n";
      return report.passed ? kOk : kVerificationFailed;
    }

    if (simulate->parsed()) {
      const SubspaceSystem system = json_io::system_from_json(json_io::read_file(system_path));
      if (system.dim() > config.max_dimension) {
        throw Error(ErrorCode::CapExceeded, "dimension " + std::to_string(system.dim()) +
                                                " exceeds the configured maximum");
      }
      const Sequence order = json_io::sequence_from_json(json_io::read_file(order_path));
      const Vector xi0 = parse_vector(xi0_arg);
      StopRule stop{tol, max_iters ? max_iters : config.max_iters, config.log_stride};
      const Trajectory t = run_map(system, order, xi0, stop);
      out << "step,distance_to_target,distance_to_current_set\n";
      for (const auto& p : t.log) {
        out << p.step << "," << fmt(p.distance_to_target) << "," << fmt(p.distance_to_current_set) << "\n";
      }
      const auto report = convergence_report(t, system);
      err << to_string(report.reason) << " after " << report.steps
          << " projections, final distance " << fmt(report.final_distance) << "\n";
      return kOk;
    }

    if (experiment->parsed()) {
      const Json spec = json_io::read_file(spec_path);
      const Alphabet alphabet(spec.value("alphabet", 0));
      RateOptions options;
      options.trials = trials;
      options.horizon = horizon;
      options.L = spec.value("L", alphabet.size());
      options.M = spec.value("M", std::int64_t{10});
      options.seed = seed_override.value_or(spec.value("seed", std::uint64_t{0}));
      options.jobs = jobs;
      if (!spec.contains("families") || !spec["families"].is_array()) {
        throw Error(ErrorCode::ParseError, "experiment spec needs a \"families\" array");
      }
      std::filesystem::create_directories(out_dir);
      std::ofstream csv(std::filesystem::path(out_dir) / "rates.csv");
      csv << "spec_id,trials,bounded_density_rate,excluded_from_A_rate\n";
      Json rows = Json::array();
      std::size_t index = 0;
      for (const Json& family : spec["families"]) {
        const std::string id = family.value("id", "family" + std::to_string(index));
        const GeneratorSpec g = with_length(json_io::generator_from_json(family), horizon);
        const RateRow row = empirical_class_rates(id, g, alphabet, options);
        csv << row.spec_id << "," << row.trials << "," << fmt(row.bounded_density_rate) << ","
            << fmt(row.excluded_from_A_rate) << "\n";
        rows.push_back(json_io::to_json(row));
        ++index;
      }
      Json summary;
      summary["alphabet"] = alphabet.size();
      summary["L"] = options.L;
      summary["M"] = options.M;
      summary["seed"] = options.seed;
      summary["rng"] = SplitMix64::kAlgorithm;
      summary["trials"] = options.trials;
      summary["horizon"] = options.horizon;
      summary["families"] = rows;
      if (!no_timestamp) summary["generated_at"] = timestamp();
      std::ofstream(std::filesystem::path(out_dir) / "summary.json") << summary.dump(2) << "\n";
      out << summary.dump(2) << "\n";
      return kOk;
    }
  } catch (const Error& e) {
    err << "error: " << to_string(e.code()) << ": " << e.what() << "\n";
    return e.code() == ErrorCode::CapExceeded ? kCapExceeded : kInput;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kInput;
  }
  return kUsage;
}

}  // namespace pol::cli
