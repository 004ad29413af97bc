// corred: command-line front end for the reduction library.
//
//   corred run --config <path> [--out <path>] [--include-ties]
//   corred reduce <state> --dims NA NB --method neumann|conditioned|projective|correlated
//   corred decompose epr|triplet|spin_pair_initial|spin_pair_t [--theta] [--phi]
//   corred validate <file>
//
// Exit codes: 0 success, 1 verification failed, 2 configuration / parse /
// validation error, 3 numerical failure, 4 I/O error.
// CORRED_LOG=error|info|debug controls diagnostics on stderr.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "CLI11.hpp"
#include "corred/ensembles.hpp"
#include "corred/errors.hpp"
#include "corred/experiment.hpp"
#include "corred/io.hpp"
#include "corred/models.hpp"
#include "corred/reduction.hpp"
#include "corred/states.hpp"

namespace {

using corred::io::json;

enum Exit : int {
  kOk = 0,
  kVerificationFailed = 1,
  kConfigError = 2,
  kNumericalFailure = 3,
  kIoError = 4,
};

void setup_logging() {
  auto logger = spdlog::stderr_color_mt("corred");
  spdlog::set_default_logger(logger);
  spdlog::set_pattern("[%l] %v");
  const char* env = std::getenv("CORRED_LOG");
  const std::string level = env ? env : "error";
  if (level == "debug") spdlog::set_level(spdlog::level::debug);
  else if (level == "info") spdlog::set_level(spdlog::level::info);
  else spdlog::set_level(spdlog::level::err);
}

void emit(const json& doc, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << doc.dump(2) << '\n';
    return;
  }
  std::ofstream out(out_path);
  if (!out) throw corred::io::IoError("cannot write " + out_path);
  out << doc.dump(2) << '\n';
}

corred::Side parse_side(const std::string& s) {
  if (s == "alpha") return corred::Side::alpha;
  if (s == "beta") return corred::Side::beta;
  throw corred::ParseError("side must be 'alpha' or 'beta'");
}

struct RunArgs {
  std::string config;
  std::string out;
  bool include_ties = false;
};

int run_command(const RunArgs& args) {
  const std::filesystem::path path(args.config);
  corred::ExperimentConfig cfg =
      corred::config_from_json(corred::io::read_json_file(path), path.parent_path());
  if (!args.out.empty()) cfg.output_path = args.out;
  if (args.include_ties) cfg.include_ties = true;
  spdlog::info("running {} time points", cfg.grid.steps + 1);
  const corred::ExperimentResult result = corred::run_experiment(cfg);

  std::ofstream file;
  if (cfg.output_path) {
    file.open(*cfg.output_path);
    if (!file) throw corred::io::IoError("cannot write " + cfg.output_path->string());
  }
  std::ostream& out = cfg.output_path ? static_cast<std::ostream&>(file) : std::cout;
  if (cfg.format == corred::OutputFormat::csv) corred::write_csv(out, result);
  else out << corred::result_to_json(result).dump(2) << '\n';
  return kOk;
}

struct ReduceArgs {
  std::string state;
  std::vector<std::size_t> dims{2, 2};
  std::string method = "neumann";
  std::size_t level = 0;
  std::string given = "beta";
  std::string sigma;
  double tol = 1e-12;
  std::size_t max_iter = 10000;
  std::string seed = "neumann";
  std::string scheme = "gauss_seidel";
  std::string out;
};

int reduce_command(const ReduceArgs& args) {
  const corred::DensityMatrix rho =
      corred::io::density_from_json(corred::io::read_json_file(args.state));
  if (args.dims.size() != 2) throw corred::ParseError("--dims takes two values");
  const corred::BipartiteSystem sys(args.dims[0], args.dims[1]);
  const corred::Side given = parse_side(args.given);

  json doc;
  if (args.method == "neumann") {
    doc = corred::io::to_json(corred::neumann_reduce(rho, sys));
  } else if (args.method == "projective") {
    doc = corred::io::to_json(corred::projective_reduce(rho, sys, args.level, given));
  } else if (args.method == "conditioned") {
    if (args.sigma.empty()) throw corred::ParseError("--method conditioned needs --sigma");
    const corred::DensityMatrix sigma =
        corred::io::density_from_json(corred::io::read_json_file(args.sigma));
    const corred::DensityMatrix reduced = corred::conditioned_reduce(rho, sys, sigma, given);
    doc = {{"method", "conditioned"},
           {"given", corred::to_string(given)},
           {given == corred::Side::beta ? "rho_alpha" : "rho_beta", corred::io::to_json(reduced)}};
  } else if (args.method == "correlated") {
    corred::CorrelatedOptions opts;
    opts.tol = args.tol;
    opts.max_iter = args.max_iter;
    if (args.scheme == "jacobi") opts.scheme = corred::UpdateScheme::jacobi;
    else if (args.scheme != "gauss_seidel") throw corred::ParseError("unknown --scheme");
    if (args.seed.rfind("file:", 0) == 0) {
      opts.seed = corred::io::reduction_from_json(corred::io::read_json_file(args.seed.substr(5)));
    } else if (args.seed != "neumann") {
      throw corred::ParseError("--seed must be 'neumann' or 'file:<path>'");
    }
    const corred::IterationReport report = corred::correlated_reduce(rho, sys, opts);
    spdlog::info("correlated reduction: {} after {} sweeps", corred::to_string(report.verdict),
                 report.iterations);
    doc = corred::io::to_json(report);
  } else {
    throw corred::ParseError("unknown --method '" + args.method + "'");
  }
  emit(doc, args.out);
  return kOk;
}

struct DecomposeArgs {
  std::string kind;
  double theta = 0.0;
  double phi = 0.0;
  double t = 0.0;
  double omega = 1.0;
  double j = 0.0;
  double c = 1.0;
  double d = 0.0;
  double tol = 1e-12;
  bool report_only = false;
  std::string out;
};

int decompose_command(const DecomposeArgs& args) {
  std::optional<corred::Ensemble> ensemble;
  std::optional<corred::DensityMatrix> target;
  if (args.kind == "epr") {
    ensemble = corred::epr_decomposition(args.theta);
    target = corred::epr_state();
  } else if (args.kind == "triplet") {
    ensemble = corred::triplet_decomposition(args.theta);
    target = corred::triplet_state();
  } else if (args.kind == "spin_pair_initial") {
    ensemble = corred::spin_pair_initial_decomposition(args.phi, args.theta);
    target = corred::spin_pair_initial(args.phi);
  } else if (args.kind == "spin_pair_t") {
    const corred::SpinPairParams p{args.omega, args.j, args.c, args.d};
    ensemble = corred::spin_pair_reduced_decomposition(args.phi, args.c, args.t, args.theta);
    target = corred::spin_pair_density(p, args.phi, args.t);
  } else {
    throw corred::ParseError("unknown decomposition '" + args.kind + "'");
  }
  const corred::VerificationReport report = corred::verify_ensemble(*ensemble, *target, args.tol);
  const corred::StatisticalAverages stats =
      corred::statistical_averages(*ensemble, corred::Side::alpha, corred::kUpper);
  json doc{{"kind", args.kind},
           {"branch", ensemble->branch()},
           {"theta", args.theta},
           {"ensemble", corred::io::to_json(*ensemble)},
           {"verification", corred::io::to_json(report)},
           {"statistical_averages", {{"mixed", stats.mixed}, {"square", stats.square}}}};
  if (args.kind == "spin_pair_initial" || args.kind == "spin_pair_t") doc["phi"] = args.phi;
  if (args.kind == "spin_pair_t") doc["t"] = args.t;
  emit(doc, args.out);
  if (!report.passed) spdlog::info("verification error {} exceeds {}", report.max_error, args.tol);
  return report.passed || args.report_only ? kOk : kVerificationFailed;
}

int validate_command(const std::string& file) {
  const json doc = corred::io::read_json_file(file);
  json out{{"file", file}};
  try {
    if (doc.contains("experiment")) {
      const std::filesystem::path path(file);
      corred::config_from_json(doc, path.parent_path());
      out["kind"] = "config";
    } else if (doc.contains("model")) {
      out["model"] = corred::io::to_json(corred::io::model_from_json(doc));
      out["kind"] = "model";
    } else if (doc.contains("terms")) {
      const corred::Ensemble e = corred::io::ensemble_from_json(doc);
      out["kind"] = "ensemble";
      out["terms"] = e.terms().size();
    } else if (doc.value("kind", "") == "density") {
      const corred::DensityMatrix rho = corred::io::density_from_json(doc);
      out["kind"] = "density";
      out["min_eigenvalue"] = rho.min_eigenvalue();
      out["purity"] = rho.purity();
    } else {
      const corred::ComplexMatrix m = corred::io::matrix_from_json(doc);
      out["kind"] = "matrix";
      out["hermitian"] = corred::is_hermitian(m);
    }
  } catch (const corred::Error& e) {
    out["valid"] = false;
    out["error"] = e.what();
    std::cout << out.dump(2) << '\n';
    return kConfigError;
  }
  out["valid"] = true;
  std::cout << out.dump(2) << '\n';
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  setup_logging();
  CLI::App app{"Generalized and correlated reduction of two-part quantum states"};
  app.require_subcommand(1);

  RunArgs run_args;
  auto* run = app.add_subcommand("run", "Run a time-series experiment from a config file");
  run->add_option("--config", run_args.config, "Experiment config (JSON)")->required();
  run->add_option("--out", run_args.out, "Output path (overrides the config)");
  run->add_flag("--include-ties", run_args.include_ties,
                "Keep grid nodes that fall exactly on step ties");

  ReduceArgs reduce_args;
  auto* reduce = app.add_subcommand("reduce", "Reduce a state file, JSON on stdout");
  reduce->add_option("state", reduce_args.state, "Density matrix JSON")->required();
  reduce->add_option("--dims", reduce_args.dims, "Subsystem dimensions NA NB")->expected(2);
  reduce->add_option("--method", reduce_args.method, "neumann|conditioned|projective|correlated");
  reduce->add_option("--level", reduce_args.level, "Projector level index (projective)");
  reduce->add_option("--given", reduce_args.given, "Conditioned side: alpha|beta");
  reduce->add_option("--sigma", reduce_args.sigma, "Conditioning state file (conditioned)");
  reduce->add_option("--tol", reduce_args.tol, "Convergence tolerance (correlated)");
  reduce->add_option("--max-iter", reduce_args.max_iter, "Sweep budget (correlated)");
  reduce->add_option("--seed", reduce_args.seed, "neumann|file:<path> (correlated)");
  reduce->add_option("--scheme", reduce_args.scheme, "gauss_seidel|jacobi (correlated)");
  reduce->add_option("--out", reduce_args.out, "Output path instead of stdout");

  DecomposeArgs dec_args;
  auto* decompose = app.add_subcommand("decompose", "Build and verify an ensemble decomposition");
  decompose->add_option("kind", dec_args.kind, "epr|triplet|spin_pair_initial|spin_pair_t")
      ->required();
  decompose->add_option("--theta", dec_args.theta, "Hidden phase (default 0)");
  decompose->add_option("--phi", dec_args.phi, "Initial-state angle");
  decompose->add_option("--t", dec_args.t, "Time (spin_pair_t)");
  decompose->add_option("--omega", dec_args.omega, "Zeeman frequency (spin_pair_t)");
  decompose->add_option("--j", dec_args.j, "J coupling (spin_pair_t)");
  decompose->add_option("--c", dec_args.c, "c coupling (spin_pair_t)");
  decompose->add_option("--d", dec_args.d, "d coupling (spin_pair_t)");
  decompose->add_option("--tol", dec_args.tol, "Verification tolerance");
  decompose->add_flag("--report-only", dec_args.report_only, "Exit 0 regardless of the error");
  decompose->add_option("--out", dec_args.out, "Output path instead of stdout");

  std::string validate_file;
  auto* validate = app.add_subcommand("validate", "Validate a state, ensemble, model or config");
  validate->add_option("file", validate_file, "JSON file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kConfigError;
  }

  try {
    if (*run) return run_command(run_args);
    if (*reduce) return reduce_command(reduce_args);
    if (*decompose) return decompose_command(dec_args);
    if (*validate) return validate_command(validate_file);
  } catch (const corred::io::IoError& e) {
    spdlog::error("{}", e.what());
    std::cerr << "error: " << e.what() << '\n';
    return kIoError;
  } catch (const corred::DegenerateOverlap& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kNumericalFailure;
  } catch (const corred::NumericalFailure& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kNumericalFailure;
  } catch (const corred::TieUndefined& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kNumericalFailure;
  } catch (const corred::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kConfigError;
  }
  return kConfigError;
}
