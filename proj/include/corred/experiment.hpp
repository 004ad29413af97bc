#pragma once

// Time-series experiments: propagate a model state over a time grid and reduce
// it at every point.
//
// Config document:
//   {
//     "experiment": "epr" | "spin_pair" | "jcm_vacuum" | "custom",
//     "params": {...} | "<model file>",     spin_pair: omega, j, c, d, phi
//                                          jcm_vacuum: omega, rabi, n_max
//                                          custom: state (path), dims [na, nb]
//     "time_grid": {"start": t0, "stop": t1, "steps": n},
//     "reduction": {"method": "neumann" | "projective" | "conditioned" | "correlated",
//                   "level": k, "given": "alpha" | "beta", "state": "<sigma file>",
//                   "tol": 1e-12, "max_iter": 10000, "seed": "neumann" | "file:<path>",
//                   "scheme": "gauss_seidel" | "jacobi"},
//     "include_ties": false,
//     "output": {"format": "csv" | "json", "path": "<file>"}
//   }
//
// Relative paths are resolved against the directory of the config file.

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "corred/errors.hpp"
#include "corred/io.hpp"
#include "corred/models.hpp"
#include "corred/reduction.hpp"

namespace corred {

class ConfigError : public ParseError {
 public:
  using ParseError::ParseError;
};

/// Every time point failed numerically.
class NumericalFailure : public Error {
 public:
  using Error::Error;
};

enum class ExperimentKind { epr, spin_pair, jcm_vacuum, custom };

struct TimeGrid {
  double start = 0.0;
  double stop = 0.0;
  std::size_t steps = 1;
};

struct ReductionSpec {
  Method method = Method::neumann;
  std::size_t level = 0;
  Side given_side = Side::beta;
  std::optional<std::filesystem::path> conditioning_state;
  double tol = 1e-12;
  std::size_t max_iter = 10000;
  UpdateScheme scheme = UpdateScheme::gauss_seidel;
  std::optional<std::filesystem::path> seed_file;
};

enum class OutputFormat { csv, json };

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::epr;
  SpinPairParams spin_pair;
  double phi = 0.0;
  JcmParams jcm;
  std::optional<std::filesystem::path> custom_state;
  std::size_t custom_dim_alpha = 2;
  std::size_t custom_dim_beta = 2;
  TimeGrid grid;
  ReductionSpec reduction;
  bool include_ties = false;
  OutputFormat format = OutputFormat::csv;
  std::optional<std::filesystem::path> output_path;
};

/// Throws ConfigError on any invalid or missing field.
ExperimentConfig config_from_json(const io::json& j, const std::filesystem::path& base_dir = {});
/// Fully resolved config, embedded in every output.
io::json to_json(const ExperimentConfig& cfg);

/// Grid nodes start + k (stop - start) / steps for k = 0..steps. Unless
/// include_ties is set, a node on a tie of the model (equal competing
/// populations) is moved forward by half a step.
std::vector<double> time_points(const ExperimentConfig& cfg);

struct ExperimentRow {
  double t = 0.0;
  std::vector<double> alpha_populations;
  std::vector<double> beta_populations;
  double alpha_coherence = 0.0;  // largest |off-diagonal| of rho_alpha
  double beta_coherence = 0.0;
  double reconstruction_error = 0.0;
  std::string verdict;  // correlated verdict, "degenerate", or "n/a"
  std::size_t iterations = 0;
};

struct ExperimentResult {
  io::json config;
  std::vector<std::string> columns;
  std::vector<ExperimentRow> rows;
};

/// Rows are evaluated concurrently and returned ordered by t. Throws
/// NumericalFailure if every row hit a degenerate overlap.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

/// "# config: <json>" line, header line, then one line per row; numbers with
/// 17 significant digits.
void write_csv(std::ostream& out, const ExperimentResult& result);
io::json result_to_json(const ExperimentResult& result);

}  // namespace corred
