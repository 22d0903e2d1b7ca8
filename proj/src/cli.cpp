#include "infoorder/cli.hpp"

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <ostream>

#include <CLI11.hpp>

#include "infoorder/io.hpp"

namespace infoorder::cli {

using nlohmann::json;

void apply_config_file(RunConfig& config, const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open config file " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
  if (!doc.is_object()) throw FormatError(path.string() + ": expected an object");
  auto positive_int = [&](const std::string& key) {
    const json& v = doc.at(key);
    if (!v.is_number_integer() || v.get<long long>() < 1) {
      throw FormatError("'" + key + "' must be a positive integer");
    }
    return v.get<int>();
  };
  for (const auto& [key, value] : doc.items()) {
    if (key == "tolerances") {
      config.tol = tolerances_from_json(value, config.tol);
    } else if (key == "t_resolution") {
      config.criterion.t_resolution = positive_int(key);
    } else if (key == "max_depth") {
      config.criterion.max_depth = positive_int(key);
    } else if (key == "max_iterations") {
      config.solver.max_iterations = positive_int(key);
    } else if (key == "stall_window") {
      config.solver.stall_window = positive_int(key);
    } else if (key == "t_max") {
      if (!value.is_number() || !(value.get<double>() > 0)) throw FormatError("'t_max' must be positive");
      config.t_max = value.get<double>();
    } else if (key == "resolution") {
      config.resolution = positive_int(key);
      if (config.resolution < 2) throw FormatError("'resolution' must be >= 2");
    } else if (key == "out_dir") {
      if (!value.is_string()) throw FormatError("'out_dir' must be a string");
      config.out_dir = value.get<std::string>();
    } else {
      throw FormatError("unknown config key '" + key + "'");
    }
  }
}

namespace {

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw FormatError("cannot write " + path.string());
  out << text;
}

json config_json(const RunConfig& c) {
  return {{"tolerances", tolerances_to_json(c.tol)},
          {"t_resolution", c.criterion.t_resolution},
          {"max_depth", c.criterion.max_depth},
          {"max_iterations", c.solver.max_iterations},
          {"stall_window", c.solver.stall_window},
          {"t_max", c.t_max},
          {"resolution", c.resolution}};
}

std::string describe_t(double t) {
  return std::isfinite(t) ? format_double(t) : std::string("inf");
}

std::string describe_vector(const ComplexVector& v) {
  std::ostringstream os;
  os << "(";
  for (Index i = 0; i < v.size(); ++i) {
    if (i) os << ", ";
    os << format_double(v(i).real());
    if (v(i).imag() != 0) os << (v(i).imag() < 0 ? "-" : "+") << format_double(std::abs(v(i).imag())) << "i";
  }
  os << ")";
  return os.str();
}

struct ReproduceArgs {
  double alpha = 0;
  double beta = 0;
  bool allow_out_of_hypothesis = false;
};

int cmd_reproduce(const ReproduceArgs& args, const RunConfig& config, std::ostream& out,
                  std::ostream& err) {
  std::optional<CounterexampleParams> params;
  try {
    params.emplace(args.alpha, args.beta);
  } catch (const InvalidInput& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }
  if (!args.allow_out_of_hypothesis && !(params->in_hypothesis() && params->beta > 0)) {
    err << "error: reproduce requires 0 < beta <= alpha <= 1 (use --allow-out-of-hypothesis to "
           "explore other values)\n";
    return kUsage;
  }

  ReproductionConfig rc;
  rc.tol = config.tol;
  rc.criterion = config.criterion;
  rc.solver = config.solver;
  rc.t_max = config.t_max;
  rc.resolution = config.resolution;
  rc.allow_out_of_hypothesis = args.allow_out_of_hypothesis;
  const ReproductionReport report = reproduce(*params, rc);

  json doc = to_json(report);
  doc["config"] = config_json(config);
  if (config.timestamp) doc["generated_at"] = utc_timestamp();

  std::filesystem::create_directories(config.out_dir);
  write_text(config.out_dir / "report.json", doc.dump(2) + "\n");
  write_text(config.out_dir / "gap_curve.csv", gap_curve_csv(report.curve));
  const CounterexampleStates states = build_states(*params);
  write_matrix_file(config.out_dir / "states.json",
                    {{"rho0", states.rho.rho0().matrix()},
                     {"rho1", states.rho.rho1().matrix()},
                     {"sigma0", states.sigma.rho0().matrix()},
                     {"sigma1", states.sigma.rho1().matrix()}});

  if (config.format == OutputFormat::Json) {
    out << doc.dump(2) << "\n";
  } else {
    out << "reproduce alpha=" << format_double(report.alpha) << " beta=" << format_double(report.beta)
        << (report.hypothesis_holds ? "" : " (outside alpha >= beta > 0)") << "\n";
    for (const auto& s : report.stages) {
      out << "  [" << (s.passed ? "pass" : "FAIL") << "] " << s.name;
      if (!s.detail.empty()) out << ": " << s.detail;
      out << "\n";
    }
    out << "overall: " << (report.success ? "success" : "failure") << "\n";
    out << "wrote " << (config.out_dir / "report.json").string() << ", "
        << (config.out_dir / "gap_curve.csv").string() << "\n";
  }
  if (const StageResult* failed = report.first_failure()) {
    err << "stage failed: " << failed->name << "\n";
    return kNegative;
  }
  return kSuccess;
}

int cmd_compare(const std::filesystem::path& input, const RunConfig& config, std::ostream& out,
                std::ostream& err) {
  const DichotomyPair dp = read_dichotomy_pair(input, config.tol);
  const CriterionVerdict v = t_criterion(dp.source, dp.target, config.criterion, config.tol);
  const bool commuting = commutes(dp.source, config.tol.commute);

  std::string interpretation;
  if (v.outcome == CriterionOutcome::Fails) {
    interpretation = "≥^c does not hold";
  } else if (v.outcome == CriterionOutcome::HoldsCertified) {
    interpretation = commuting ? "≥^c holds (commuting source pair)"
                               : "caveat: rho0 and rho1 do not commute, so the criterion is only "
                                 "necessary for ≥^c";
  }

  if (config.format == OutputFormat::Json) {
    json doc = to_json(v);
    doc["source_commutes"] = commuting;
    doc["interpretation"] = interpretation;
    out << doc.dump(2) << "\n";
  } else {
    out << to_string(v.outcome);
    if (v.outcome == CriterionOutcome::Fails && v.witness_t) {
      out << " at t=" << describe_t(*v.witness_t) << " (gap " << format_double(v.witness_gap) << ")";
    }
    if (!interpretation.empty()) out << "; " << interpretation;
    out << "\n";
    for (const auto& iv : v.uncertified) {
      out << "  uncertified [" << describe_t(iv.lo) << ", " << describe_t(iv.hi) << "]\n";
    }
  }
  switch (v.outcome) {
    case CriterionOutcome::HoldsCertified: return kSuccess;
    case CriterionOutcome::Fails: return kNegative;
    case CriterionOutcome::Undecided:
      err << v.uncertified.size() << " uncertified intervals\n";
      return kUndecided;
  }
  return kUndecided;
}

int cmd_map_feasible(const std::filesystem::path& input, MapClass map_class,
                     const std::optional<std::filesystem::path>& witness_out,
                     const RunConfig& config, std::ostream& out, std::ostream& err) {
  const MapFamilyProblem problem(read_state_pairs(input, config.tol), map_class);
  const FeasibilityReport r = map_feasible(problem, config.solver, config.tol);

  std::optional<std::filesystem::path> written;
  if (r.witness) {
    written = witness_out.value_or(config.out_dir / "witness_choi.json");
    if (written->has_parent_path()) std::filesystem::create_directories(written->parent_path());
    std::vector<std::pair<std::string, ComplexMatrix>> named{{"choi", r.witness->matrix()}};
    if (r.cp_part) named.emplace_back("cp_part", r.cp_part->matrix());
    if (r.copositive_part) named.emplace_back("copositive_part", r.copositive_part->matrix());
    write_matrix_file(*written, named);
  }

  if (config.format == OutputFormat::Json) {
    json doc = to_json(r);
    doc["class"] = to_string(map_class);
    doc["witness_file"] = written ? json(written->string()) : json(nullptr);
    out << doc.dump(2) << "\n";
  } else {
    out << "class: " << to_string(map_class) << "\n"
        << "verdict: " << to_string(r.verdict) << "\n"
        << "residual: " << format_double(r.residual) << "\n"
        << "exactness: " << to_string(r.exactness) << "\n"
        << "iterations: " << r.iterations << "\n";
    if (!r.note.empty()) out << "note: " << r.note << "\n";
    if (r.obstruction) {
      out << "obstruction: common support vector " << describe_vector(r.obstruction->psi)
          << " of pairs " << r.obstruction->first << " and " << r.obstruction->second << "\n";
    }
    if (written) out << "witness: " << written->string() << "\n";
  }
  switch (r.verdict) {
    case Verdict::Feasible: return kSuccess;
    case Verdict::Infeasible: return kNegative;
    case Verdict::Undecided:
      err << "undecided after " << r.iterations << " iterations\n";
      return kUndecided;
  }
  return kUndecided;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Information orderings between classical and quantum dichotomies"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string tol_file;
  bool no_timestamp = false;
  std::string format = "text";
  app.add_option("--tol-file", tol_file, "JSON settings file (tolerances and solver limits)")
      ->check(CLI::ExistingFile);
  app.add_flag("--no-timestamp", no_timestamp, "omit the generated_at field from reports");
  app.add_option("--format", format, "stdout format")->check(CLI::IsMember({"text", "json"}));

  ReproduceArgs rargs;
  double t_max = 0;
  int resolution = 0;
  std::string out_dir;
  auto* reproduce_cmd = app.add_subcommand("reproduce", "run the full counterexample check");
  reproduce_cmd->add_option("--alpha", rargs.alpha)->required();
  reproduce_cmd->add_option("--beta", rargs.beta)->required();
  auto* t_max_opt = reproduce_cmd->add_option("--t-max", t_max)->check(CLI::PositiveNumber);
  auto* resolution_opt =
      reproduce_cmd->add_option("--resolution", resolution, "gap-curve grid points")
          ->check(CLI::Range(2, 100000000));
  reproduce_cmd->add_flag("--allow-out-of-hypothesis", rargs.allow_out_of_hypothesis);
  auto* out_opt = reproduce_cmd->add_option("--out", out_dir, "output directory");

  std::string compare_input;
  auto* compare_cmd = app.add_subcommand("compare", "decide the trace-norm criterion");
  compare_cmd->add_option("--input", compare_input, "matrix file with rho0, rho1, sigma0, sigma1")
      ->required()
      ->check(CLI::ExistingFile);

  std::string map_input;
  std::string map_class = "cptp";
  std::string witness_out;
  auto* map_cmd = app.add_subcommand("map-feasible", "search for a map rho_theta -> sigma_theta");
  map_cmd->add_option("--input", map_input, "matrix file with a pair list or rho0..sigma1")
      ->required()
      ->check(CLI::ExistingFile);
  map_cmd->add_option("--class", map_class, "map class")->check(CLI::IsMember({"cptp", "ptp"}));
  auto* witness_opt = map_cmd->add_option("--witness-out", witness_out, "witness Choi matrix file");
  auto* map_out_opt = map_cmd->add_option("--out", out_dir, "output directory");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kSuccess;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kSuccess;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }

  RunConfig config;
  if (const char* env = std::getenv(kOutDirEnv); env && *env) config.out_dir = env;
  try {
    if (!tol_file.empty()) apply_config_file(config, tol_file);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }
  if (t_max_opt->count()) config.t_max = t_max;
  if (resolution_opt->count()) config.resolution = resolution;
  if (out_opt->count() || map_out_opt->count()) config.out_dir = out_dir;
  config.timestamp = !no_timestamp;
  config.format = format == "json" ? OutputFormat::Json : OutputFormat::Text;

  try {
    if (*reproduce_cmd) return cmd_reproduce(rargs, config, out, err);
    if (*compare_cmd) return cmd_compare(compare_input, config, out, err);
    if (*map_cmd) {
      std::optional<std::filesystem::path> w;
      if (witness_opt->count()) w = witness_out;
      return cmd_map_feasible(map_input, map_class == "ptp" ? MapClass::DecomposablePTP : MapClass::CPTP,
                              w, config, out, err);
    }
  } catch (const FormatError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const SolverError& e) {
    err << "error: " << e.what() << "\n";
    return kUndecided;
  }
  return kUsage;
}

}  // namespace infoorder::cli
