#include "corred/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>
#include <thread>

#include "corred/states.hpp"

namespace corred {

namespace {

using io::json;

const char* kind_name(ExperimentKind k) {
  switch (k) {
    case ExperimentKind::epr: return "epr";
    case ExperimentKind::spin_pair: return "spin_pair";
    case ExperimentKind::jcm_vacuum: return "jcm_vacuum";
    case ExperimentKind::custom: return "custom";
  }
  return "unknown";
}

template <typename T>
T field_or(const json& j, const char* key, T fallback) {
  if (!j.is_object() || !j.contains(key)) return fallback;
  try {
    return j[key].get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config field '") + key + "': " + e.what());
  }
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
  std::filesystem::path path(p);
  return path.is_relative() && !base.empty() ? base / path : path;
}

ExperimentKind parse_kind(const std::string& s) {
  if (s == "epr") return ExperimentKind::epr;
  if (s == "spin_pair") return ExperimentKind::spin_pair;
  if (s == "jcm_vacuum" || s == "jcm") return ExperimentKind::jcm_vacuum;
  if (s == "custom") return ExperimentKind::custom;
  throw ConfigError("unknown experiment '" + s + "'");
}

Method parse_method(const std::string& s) {
  if (s == "neumann") return Method::neumann;
  if (s == "projective") return Method::projective;
  if (s == "conditioned") return Method::conditioned;
  if (s == "correlated") return Method::correlated;
  throw ConfigError("unknown reduction method '" + s + "'");
}

Side parse_side(const std::string& s) {
  if (s == "alpha") return Side::alpha;
  if (s == "beta") return Side::beta;
  throw ConfigError("side must be 'alpha' or 'beta', got '" + s + "'");
}

std::string path_string(const std::optional<std::filesystem::path>& p) {
  return p ? p->string() : std::string();
}

// Loads "params", following a model-file reference when it is a string.
json load_params(const json& j, const std::filesystem::path& base, const char* expected_model) {
  if (!j.contains("params")) return json::object();
  const json& params = j["params"];
  if (!params.is_string()) return params;
  const json model = io::read_json_file(resolve(base, params.get<std::string>()));
  if (field_or<std::string>(model, "model", "") != expected_model)
    throw ConfigError(std::string("model file is not a '") + expected_model + "' model");
  return model.contains("params") ? model["params"] : json::object();
}

double max_off_diagonal(const ComplexMatrix& m) {
  double out = 0.0;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      if (i != j) out = std::max(out, std::abs(m(i, j)));
  return out;
}

bool is_tie(const ExperimentConfig& cfg, double t) {
  constexpr double kTie = 1e-9;
  switch (cfg.kind) {
    case ExperimentKind::jcm_vacuum: return std::abs(std::cos(cfg.jcm.rabi * t)) < kTie;
    case ExperimentKind::spin_pair:
      return std::abs(std::cos(2.0 * cfg.phi)) >= 1e-12 &&
             std::abs(spin_pair_correlation(cfg.phi, cfg.spin_pair.c_coupling, t)) < kTie;
    default: return false;
  }
}

struct Workload {
  BipartiteSystem system;
  std::optional<DensityMatrix> fixed_state;
  std::optional<DensityMatrix> conditioning;
  Seed seed = NeumannSeed{};
};

Workload prepare(const ExperimentConfig& cfg) {
  Workload w{BipartiteSystem(2, 2), std::nullopt, std::nullopt, NeumannSeed{}};
  switch (cfg.kind) {
    case ExperimentKind::epr: w.fixed_state = epr_state(); break;
    case ExperimentKind::spin_pair: break;
    case ExperimentKind::jcm_vacuum: w.system = jcm_system(cfg.jcm); break;
    case ExperimentKind::custom:
      w.system = BipartiteSystem(cfg.custom_dim_alpha, cfg.custom_dim_beta);
      w.fixed_state = io::density_from_json(io::read_json_file(*cfg.custom_state));
      if (w.fixed_state->dim() != w.system.composite_dim())
        throw ConfigError("custom state does not match dims");
      break;
  }
  if (cfg.reduction.conditioning_state)
    w.conditioning = io::density_from_json(io::read_json_file(*cfg.reduction.conditioning_state));
  if (cfg.reduction.seed_file)
    w.seed = io::reduction_from_json(io::read_json_file(*cfg.reduction.seed_file));
  return w;
}

DensityMatrix state_at(const ExperimentConfig& cfg, const Workload& w, double t) {
  if (w.fixed_state) return *w.fixed_state;
  if (cfg.kind == ExperimentKind::spin_pair) return spin_pair_density(cfg.spin_pair, cfg.phi, t);
  return jcm_vacuum_density(cfg.jcm, t);
}

void fill(ExperimentRow& row, const ReductionResult& r) {
  row.alpha_populations = r.rho_alpha.populations();
  row.alpha_coherence = max_off_diagonal(r.rho_alpha.matrix());
  if (r.rho_beta) {
    row.beta_populations = r.rho_beta->populations();
    row.beta_coherence = max_off_diagonal(r.rho_beta->matrix());
  }
  row.reconstruction_error = r.reconstruction_error;
}

ExperimentRow evaluate(const ExperimentConfig& cfg, const Workload& w, double t) {
  ExperimentRow row;
  row.t = t;
  row.verdict = "n/a";
  const DensityMatrix rho = state_at(cfg, w, t);
  const ReductionSpec& spec = cfg.reduction;
  try {
    switch (spec.method) {
      case Method::neumann: fill(row, neumann_reduce(rho, w.system)); break;
      case Method::projective:
        fill(row, projective_reduce(rho, w.system, spec.level, spec.given_side));
        break;
      case Method::conditioned: {
        DensityMatrix reduced =
            conditioned_reduce(rho, w.system, *w.conditioning, spec.given_side);
        const bool alpha_reduced = spec.given_side == Side::beta;
        const ComplexMatrix& a = alpha_reduced ? reduced.matrix() : w.conditioning->matrix();
        const ComplexMatrix& b = alpha_reduced ? w.conditioning->matrix() : reduced.matrix();
        const double err = max_abs_diff(rho.matrix(), kron(a, b));
        ReductionResult r = alpha_reduced
                                ? ReductionResult{reduced, *w.conditioning, Method::conditioned,
                                                  err, {}}
                                : ReductionResult{*w.conditioning, reduced, Method::conditioned,
                                                  err, {}};
        fill(row, r);
        break;
      }
      case Method::correlated: {
        CorrelatedOptions opts;
        opts.tol = spec.tol;
        opts.max_iter = spec.max_iter;
        opts.scheme = spec.scheme;
        opts.seed = w.seed;
        const IterationReport report = correlated_reduce(rho, w.system, opts);
        fill(row, report.final);
        row.verdict = to_string(report.verdict);
        row.iterations = report.iterations;
        break;
      }
    }
  } catch (const DegenerateOverlap&) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    row.alpha_populations.assign(w.system.dim_alpha(), nan);
    row.beta_populations.assign(w.system.dim_beta(), nan);
    row.alpha_coherence = row.beta_coherence = row.reconstruction_error = nan;
    row.verdict = to_string(Verdict::degenerate);
  }
  return row;
}

std::string format_number(double x) {
  std::ostringstream os;
  os << std::setprecision(17) << x;
  return os.str();
}

}  // namespace

ExperimentConfig config_from_json(const json& j, const std::filesystem::path& base_dir) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  ExperimentConfig cfg;
  try {
    cfg.kind = parse_kind(field_or<std::string>(j, "experiment", ""));
    switch (cfg.kind) {
      case ExperimentKind::spin_pair: {
        const json params = load_params(j, base_dir, "spin_pair");
        cfg.spin_pair = io::spin_pair_params_from_json(params);
        cfg.phi = field_or<double>(params, "phi", field_or<double>(j, "phi", 0.0));
        break;
      }
      case ExperimentKind::jcm_vacuum:
        cfg.jcm = io::jcm_params_from_json(load_params(j, base_dir, "jcm"));
        break;
      case ExperimentKind::custom: {
        const json params = j.contains("params") ? j["params"] : json::object();
        const auto state = field_or<std::string>(params, "state", "");
        if (state.empty()) throw ConfigError("custom experiment needs params.state");
        cfg.custom_state = resolve(base_dir, state);
        const auto dims = field_or<std::vector<std::size_t>>(params, "dims", {2, 2});
        if (dims.size() != 2 || dims[0] == 0 || dims[1] == 0)
          throw ConfigError("params.dims must be two positive dimensions");
        cfg.custom_dim_alpha = dims[0];
        cfg.custom_dim_beta = dims[1];
        break;
      }
      case ExperimentKind::epr: break;
    }

    const json grid = j.contains("time_grid") ? j["time_grid"] : json::object();
    cfg.grid.start = field_or<double>(grid, "start", 0.0);
    cfg.grid.stop = field_or<double>(grid, "stop", cfg.grid.start);
    cfg.grid.steps = field_or<std::size_t>(grid, "steps", 1);
    if (cfg.grid.steps < 1) throw ConfigError("time_grid.steps must be >= 1");
    if (!(cfg.grid.stop >= cfg.grid.start)) throw ConfigError("time_grid.stop must be >= start");

    const json red = j.contains("reduction") ? j["reduction"] : json::object();
    ReductionSpec& spec = cfg.reduction;
    spec.method = parse_method(field_or<std::string>(red, "method", "neumann"));
    spec.level = field_or<std::size_t>(red, "level", 0);
    spec.given_side = parse_side(field_or<std::string>(red, "given", "beta"));
    spec.tol = field_or<double>(red, "tol", spec.tol);
    spec.max_iter = field_or<std::size_t>(red, "max_iter", spec.max_iter);
    if (!(spec.tol > 0.0)) throw ConfigError("reduction.tol must be > 0");
    if (spec.max_iter < 1) throw ConfigError("reduction.max_iter must be >= 1");
    const auto scheme = field_or<std::string>(red, "scheme", "gauss_seidel");
    if (scheme == "jacobi") spec.scheme = UpdateScheme::jacobi;
    else if (scheme != "gauss_seidel") throw ConfigError("unknown scheme '" + scheme + "'");
    const auto seed = field_or<std::string>(red, "seed", "neumann");
    if (seed.rfind("file:", 0) == 0) spec.seed_file = resolve(base_dir, seed.substr(5));
    else if (seed != "neumann") throw ConfigError("seed must be 'neumann' or 'file:<path>'");
    const auto state = field_or<std::string>(red, "state", "");
    if (!state.empty()) spec.conditioning_state = resolve(base_dir, state);
    if (spec.method == Method::conditioned && !spec.conditioning_state)
      throw ConfigError("conditioned reduction needs reduction.state");

    cfg.include_ties = field_or<bool>(j, "include_ties", false);
    const json out = j.contains("output") ? j["output"] : json::object();
    const auto format = field_or<std::string>(out, "format", "csv");
    if (format == "json") cfg.format = OutputFormat::json;
    else if (format != "csv") throw ConfigError("output.format must be 'csv' or 'json'");
    const auto path = field_or<std::string>(out, "path", "");
    if (!path.empty()) cfg.output_path = resolve(base_dir, path);
  } catch (const ConfigError&) {
    throw;
  } catch (const ParseError& e) {
    throw ConfigError(e.what());
  }
  return cfg;
}

json to_json(const ExperimentConfig& cfg) {
  json j{{"experiment", kind_name(cfg.kind)}};
  switch (cfg.kind) {
    case ExperimentKind::spin_pair:
      j["params"] = io::to_json(cfg.spin_pair)["params"];
      j["params"]["phi"] = cfg.phi;
      break;
    case ExperimentKind::jcm_vacuum: j["params"] = io::to_json(cfg.jcm)["params"]; break;
    case ExperimentKind::custom:
      j["params"] = {{"state", path_string(cfg.custom_state)},
                     {"dims", {cfg.custom_dim_alpha, cfg.custom_dim_beta}}};
      break;
    case ExperimentKind::epr: j["params"] = json::object(); break;
  }
  j["time_grid"] = {{"start", cfg.grid.start}, {"stop", cfg.grid.stop}, {"steps", cfg.grid.steps}};
  const ReductionSpec& spec = cfg.reduction;
  j["reduction"] = {{"method", to_string(spec.method)},
                    {"level", spec.level},
                    {"given", to_string(spec.given_side)},
                    {"state", path_string(spec.conditioning_state)},
                    {"tol", spec.tol},
                    {"max_iter", spec.max_iter},
                    {"scheme", spec.scheme == UpdateScheme::jacobi ? "jacobi" : "gauss_seidel"},
                    {"seed", spec.seed_file ? "file:" + spec.seed_file->string() : "neumann"}};
  j["include_ties"] = cfg.include_ties;
  j["output"] = {{"format", cfg.format == OutputFormat::json ? "json" : "csv"},
                 {"path", path_string(cfg.output_path)}};
  return j;
}

std::vector<double> time_points(const ExperimentConfig& cfg) {
  const double h = (cfg.grid.stop - cfg.grid.start) / static_cast<double>(cfg.grid.steps);
  std::vector<double> ts;
  ts.reserve(cfg.grid.steps + 1);
  for (std::size_t k = 0; k <= cfg.grid.steps; ++k) {
    double t = cfg.grid.start + static_cast<double>(k) * h;
    if (!cfg.include_ties && is_tie(cfg, t)) t += 0.5 * h;
    ts.push_back(t);
  }
  return ts;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  const Workload work = prepare(cfg);
  const std::vector<double> ts = time_points(cfg);

  ExperimentResult result;
  result.config = to_json(cfg);
  result.columns.push_back("t");
  for (std::size_t i = 0; i < work.system.dim_alpha(); ++i)
    result.columns.push_back("alpha_p" + std::to_string(i));
  for (std::size_t i = 0; i < work.system.dim_beta(); ++i)
    result.columns.push_back("beta_p" + std::to_string(i));
  for (const char* c : {"alpha_coherence", "beta_coherence", "reconstruction_error", "verdict",
                        "iterations"})
    result.columns.emplace_back(c);

  result.rows.resize(ts.size());
  std::vector<std::exception_ptr> errors(ts.size());
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t k = next++; k < ts.size(); k = next++) {
      try {
        result.rows[k] = evaluate(cfg, work, ts[k]);
      } catch (...) {
        errors[k] = std::current_exception();
      }
    }
  };
  const std::size_t n_threads =
      std::clamp<std::size_t>(std::thread::hardware_concurrency(), 1, ts.size());
  {
    std::vector<std::jthread> pool;
    for (std::size_t i = 1; i < n_threads; ++i) pool.emplace_back(worker);
    worker();
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);

  const bool all_degenerate = std::all_of(result.rows.begin(), result.rows.end(), [](const auto& r) {
    return r.verdict == to_string(Verdict::degenerate);
  });
  if (all_degenerate) throw NumericalFailure("degenerate overlap at every time point");
  return result;
}

void write_csv(std::ostream& out, const ExperimentResult& result) {
  out << "# config: " << result.config.dump() << '\n';
  for (std::size_t i = 0; i < result.columns.size(); ++i)
    out << (i ? "," : "") << result.columns[i];
  out << '\n';
  for (const auto& row : result.rows) {
    out << format_number(row.t);
    for (double p : row.alpha_populations) out << ',' << format_number(p);
    for (double p : row.beta_populations) out << ',' << format_number(p);
    out << ',' << format_number(row.alpha_coherence) << ',' << format_number(row.beta_coherence)
        << ',' << format_number(row.reconstruction_error) << ',' << row.verdict << ','
        << row.iterations << '\n';
  }
}

json result_to_json(const ExperimentResult& result) {
  json rows = json::array();
  for (const auto& row : result.rows) {
    json r = json::array();
    r.push_back(row.t);
    for (double p : row.alpha_populations) r.push_back(p);
    for (double p : row.beta_populations) r.push_back(p);
    r.push_back(row.alpha_coherence);
    r.push_back(row.beta_coherence);
    r.push_back(row.reconstruction_error);
    r.push_back(row.verdict);
    r.push_back(row.iterations);
    rows.push_back(std::move(r));
  }
  return json{{"config", result.config}, {"columns", result.columns}, {"rows", std::move(rows)}};
}

}  // namespace corred
