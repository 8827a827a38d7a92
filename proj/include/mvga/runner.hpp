#pragma once

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

#include "mvga/applications.hpp"
#include "mvga/eval.hpp"
#include "mvga/io.hpp"

namespace mvga {

/// Everything produced by one end-to-end run of a problem spec.
struct ProblemRun {
  nlohmann::json spec;
  LsProblem problem;
  FitModel<double> model;
  std::optional<SolveResult> solve;
  NodeSet<double> eval_nodes;
  std::optional<StackedOutput<double>> eval;
  /// Per eval node: |p - u| when an exact solution is known.
  std::optional<Vector<double>> errors;
  nlohmann::json metrics;
};

/// Runs a problem spec (JSON):
///   app       interpolation | hermite | poisson_dirichlet | poisson_mixed
///   degree    total degree n
///   order     derivative order (interpolation only; others are fixed)
///   alpha     number or named coefficient field ("neg_gauss")
///   domain    {kind: disk | ellipse_minus_disk | polygon | padua, interior,
///              boundary (total or per-curve list), radius, a, b, r,
///              vertices, padua_degree, jitter (lattice spacings)}
///   seed      RNG seed for the jitter
///   neumann_curves  curve indices carrying Neumann data (poisson_mixed)
///   problem   named exact solution; all data is derived from it
///   rhs, dirichlet  named data functions when no exact solution exists
///   nodes, values   CSV paths replacing domain/problem (see README)
///   eval      {kind: fitting | grid | interior | file, size, count, path}
///   compute_coeffs  false to fit only
/// Relative paths resolve against `base_dir`.
ProblemRun run_problem(const nlohmann::json& spec, const std::string& base_dir = ".",
                       const FitOptions& options = {});

/// Writes model.json, eval.csv, fit_nodes.csv, metrics.json (and errors.csv
/// when errors are known) into `out_dir`.
void write_outputs(const ProblemRun& run, const std::string& out_dir, io::NumberFormat fmt);

/// Named desk-scale reproductions: hermite_sin, padua_laplace,
/// poisson_dirichlet, poisson_variable, poisson_mixed.
std::vector<std::string> example_names();
nlohmann::json example_spec(const std::string& name);

}  // namespace mvga
