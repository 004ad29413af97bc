#include "corred/io.hpp"

#include <fstream>
#include <string>
#include <vector>

namespace corred::io {

namespace {

template <typename T>
T get(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    throw ParseError(std::string("missing field '") + key + "'");
  }
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ParseError(std::string("field '") + key + "': " + e.what());
  }
}

const json& field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    throw ParseError(std::string("missing field '") + key + "'");
  }
  return j[key];
}

template <typename T>
T get_or(const json& j, const char* key, T fallback) {
  if (!j.is_object() || !j.contains(key)) return fallback;
  return get<T>(j, key);
}

}  // namespace

json to_json(const ComplexMatrix& m) {
  json data = json::array();
  for (const auto& e : m.entries()) data.push_back({e.real(), e.imag()});
  return json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(data)}};
}

json to_json(const DensityMatrix& rho) {
  json j = to_json(rho.matrix());
  j["kind"] = "density";
  j["validation"] = to_string(rho.validation());
  return j;
}

json to_json(const ReductionResult& r) {
  json j{{"method", to_string(r.method)},
         {"rho_alpha", to_json(r.rho_alpha)},
         {"reconstruction_error", r.reconstruction_error}};
  j["rho_beta"] = r.rho_beta ? to_json(*r.rho_beta) : json(nullptr);
  if (!r.warnings.empty()) j["warnings"] = r.warnings;
  return j;
}

json to_json(const IterationReport& r) {
  json j{{"verdict", to_string(r.verdict)},
         {"iterations", r.iterations},
         {"residuals", r.residual_history},
         {"rho_alpha", to_json(r.final.rho_alpha)},
         {"reconstruction_error", r.final.reconstruction_error}};
  j["rho_beta"] = r.final.rho_beta ? to_json(*r.final.rho_beta) : json(nullptr);
  if (!r.final.warnings.empty()) j["warnings"] = r.final.warnings;
  return j;
}

json to_json(const Ensemble& e) {
  json terms = json::array();
  for (const auto& t : e.terms())
    terms.push_back({{"p", t.weight}, {"left", to_json(t.left)}, {"right", to_json(t.right)}});
  return json{{"terms", std::move(terms)},
              {"dims", {e.system().dim_alpha(), e.system().dim_beta()}}};
}

json to_json(const VerificationReport& r) {
  return json{{"max_error", r.max_error},
              {"diagonal_error", r.diagonal_error},
              {"coherence_error", r.coherence_error},
              {"cross_error", r.cross_error},
              {"tol", r.tol},
              {"passed", r.passed},
              {"error_matrix", to_json(r.error_matrix)}};
}

json to_json(const SpinPairParams& p) {
  return json{{"model", "spin_pair"},
              {"params",
               {{"omega", p.omega}, {"j", p.j_coupling}, {"c", p.c_coupling}, {"d", p.d_coupling}}}};
}

json to_json(const JcmParams& p) {
  return json{{"model", "jcm"},
              {"params", {{"omega", p.omega}, {"rabi", p.rabi}, {"n_max", p.n_max}}}};
}

json to_json(const ModelParams& p) {
  return std::visit([](const auto& v) { return to_json(v); }, p);
}

ComplexMatrix matrix_from_json(const json& j) {
  const auto rows = get<std::size_t>(j, "rows");
  const auto cols = get<std::size_t>(j, "cols");
  if (!j.contains("data") || !j["data"].is_array())
    throw ParseError("matrix: 'data' must be an array");
  const json& data = j["data"];
  if (data.size() != rows * cols) {
    throw ParseError("matrix: " + std::to_string(data.size()) + " entries for " +
                     std::to_string(rows) + "x" + std::to_string(cols));
  }
  std::vector<complex> entries;
  entries.reserve(data.size());
  for (const auto& e : data) {
    if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
      throw ParseError("matrix: entries must be [re, im] pairs");
    entries.emplace_back(e[0].get<double>(), e[1].get<double>());
  }
  return ComplexMatrix(rows, cols, std::move(entries));
}

DensityMatrix density_from_json(const json& j) {
  const auto level = get_or<std::string>(j, "validation", "strict");
  if (level != "strict" && level != "relaxed")
    throw ParseError("density: validation must be 'strict' or 'relaxed'");
  return DensityMatrix(matrix_from_json(j),
                       level == "strict" ? Validation::strict : Validation::relaxed);
}

Ensemble ensemble_from_json(const json& j) {
  const auto dims = get<std::vector<std::size_t>>(j, "dims");
  if (dims.size() != 2) throw ParseError("ensemble: 'dims' must have two entries");
  if (!j.contains("terms") || !j["terms"].is_array()) throw ParseError("ensemble: missing terms");
  std::vector<EnsembleTerm> terms;
  for (const auto& t : j["terms"]) {
    terms.push_back(
        {get<double>(t, "p"), matrix_from_json(field(t, "left")), matrix_from_json(field(t, "right"))});
  }
  return Ensemble(BipartiteSystem(dims[0], dims[1]), std::move(terms));
}

ReductionResult reduction_from_json(const json& j) {
  if (!j.contains("rho_alpha") || !j.contains("rho_beta") || j["rho_beta"].is_null())
    throw ParseError("reduction: needs 'rho_alpha' and 'rho_beta'");
  json a = j["rho_alpha"];
  json b = j["rho_beta"];
  if (!a.contains("validation")) a["validation"] = "relaxed";
  if (!b.contains("validation")) b["validation"] = "relaxed";
  return ReductionResult{density_from_json(a), density_from_json(b), Method::correlated,
                         get_or<double>(j, "reconstruction_error", 0.0),
                         {}};
}

SpinPairParams spin_pair_params_from_json(const json& j) {
  SpinPairParams p;
  p.omega = get_or<double>(j, "omega", p.omega);
  p.j_coupling = get_or<double>(j, "j", p.j_coupling);
  p.c_coupling = get_or<double>(j, "c", p.c_coupling);
  p.d_coupling = get_or<double>(j, "d", p.d_coupling);
  return p;
}

JcmParams jcm_params_from_json(const json& j) {
  JcmParams p;
  p.omega = get_or<double>(j, "omega", p.omega);
  p.rabi = get_or<double>(j, "rabi", p.rabi);
  p.n_max = get_or<std::size_t>(j, "n_max", p.n_max);
  if (p.n_max < 1) throw ParseError("jcm: n_max must be >= 1");
  return p;
}

ModelParams model_from_json(const json& j) {
  const auto model = get<std::string>(j, "model");
  const json params = j.contains("params") ? j["params"] : json::object();
  if (model == "spin_pair") return spin_pair_params_from_json(params);
  if (model == "jcm") return jcm_params_from_json(params);
  throw ParseError("unknown model '" + model + "'");
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

}  // namespace corred::io
