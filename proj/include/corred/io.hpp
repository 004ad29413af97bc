#pragma once

// JSON forms of the library types.
//
//   matrix      {"rows":n,"cols":m,"data":[[re,im],...]}   row-major
//   density     matrix fields + {"kind":"density","validation":"strict|relaxed"}
//   report      {"verdict","iterations","residuals","rho_alpha","rho_beta",
//                "reconstruction_error"}
//   ensemble    {"terms":[{"p":w,"left":matrix,"right":matrix}],"dims":[na,nb]}
//   model       {"model":"spin_pair"|"jcm","params":{...}}
//
// Parse failures throw ParseError.

#include <filesystem>
#include <variant>

#include "json.hpp"

#include "corred/ensembles.hpp"
#include "corred/errors.hpp"
#include "corred/matrix.hpp"
#include "corred/models.hpp"
#include "corred/reduction.hpp"
#include "corred/states.hpp"

namespace corred::io {

using json = nlohmann::json;

json to_json(const ComplexMatrix& m);
json to_json(const DensityMatrix& rho);
json to_json(const ReductionResult& r);
json to_json(const IterationReport& r);
json to_json(const Ensemble& e);
json to_json(const VerificationReport& r);
json to_json(const SpinPairParams& p);
json to_json(const JcmParams& p);

ComplexMatrix matrix_from_json(const json& j);
/// Honors the "validation" field when present (strict by default).
DensityMatrix density_from_json(const json& j);
Ensemble ensemble_from_json(const json& j);
/// Reads the rho_alpha / rho_beta pair of a reduction or report document.
ReductionResult reduction_from_json(const json& j);

using ModelParams = std::variant<SpinPairParams, JcmParams>;
/// Accepts either {"model":..., "params":{...}}.
ModelParams model_from_json(const json& j);
json to_json(const ModelParams& p);

SpinPairParams spin_pair_params_from_json(const json& j);
JcmParams jcm_params_from_json(const json& j);

/// Reads a JSON file; missing or unreadable files throw IoError, bad JSON
/// throws ParseError.
json read_json_file(const std::filesystem::path& path);

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace corred::io
