// mvga: fit, evaluate and reproduce multivariate Vandermonde-with-Arnoldi
// least-squares polynomials from the command line.
#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <iostream>

#include "mvga/io.hpp"
#include "mvga/runner.hpp"

namespace {

using nlohmann::json;

constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void report(const mvga::ProblemRun& run) {
  const auto& m = run.metrics;
  if (m.value("breakdown", false)) {
    std::cerr << "notice: breakdown at column " << m.value("breakdown_column", 0) << ", basis truncated to t="
              << m.at("t") << " of g=" << m.at("g") << "\n";
  }
  if (m.value("extrapolating", false)) {
    std::cerr << "warning: evaluation nodes lie well outside the fitting region\n";
  }
  std::cout << m.dump(2) << "\n";
}

int run_spec(const json& spec, const std::string& base_dir, const std::string& out, bool hex) {
  const mvga::ProblemRun run = mvga::run_problem(spec, base_dir);
  if (!out.empty()) mvga::write_outputs(run, out, hex ? mvga::io::NumberFormat::kHex : mvga::io::NumberFormat::kDecimal);
  report(run);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multivariate Vandermonde with Arnoldi least squares"};
  app.require_subcommand(1);

  int dim = 2, degree = -1, order = -1;
  unsigned seed = 0;
  std::string nodes, values, app_kind = "interpolation", alpha, problem, out, model_path;
  bool hex = false;

  auto* basis = app.add_subcommand("basis", "print the graded basis summary");
  basis->add_option("--dim,-d", dim, "dimension d")->required()->check(CLI::PositiveNumber);
  basis->add_option("--degree,-n", degree, "total degree n")->required()->check(CLI::NonNegativeNumber);

  auto* fit = app.add_subcommand("fit", "fit a model from node and value CSV files");
  fit->add_option("--nodes", nodes, "node CSV")->required()->check(CLI::ExistingFile);
  fit->add_option("--values", values, "value CSV")->check(CLI::ExistingFile);
  fit->add_option("--degree,-n", degree, "total degree n")->required()->check(CLI::NonNegativeNumber);
  fit->add_option("--order", order, "derivative order (interpolation)")->check(CLI::Range(0, 2));
  fit->add_option("--app", app_kind, "application")
      ->check(CLI::IsMember({"interpolation", "hermite", "poisson_dirichlet", "poisson_mixed"}));
  fit->add_option("--alpha", alpha, "Poisson coefficient: number or field name");
  fit->add_option("--out", out, "output directory");
  fit->add_option("--seed", seed, "seed for randomized geometry");
  fit->add_flag("--hex-floats", hex, "write hex floats for bit-exact round trips");

  auto* eval = app.add_subcommand("eval", "evaluate a fitted model at new nodes");
  eval->add_option("--model", model_path, "model JSON")->required()->check(CLI::ExistingFile);
  eval->add_option("--nodes", nodes, "node CSV")->required()->check(CLI::ExistingFile);
  eval->add_option("--order", order, "derivative order (default: model order)")->check(CLI::Range(0, 2));
  eval->add_option("--out", out, "output CSV (default stdout)");
  eval->add_flag("--hex-floats", hex, "write hex floats");

  auto* solve = app.add_subcommand("solve", "run a problem spec JSON");
  solve->add_option("--problem", problem, "problem spec JSON")->required()->check(CLI::ExistingFile);
  solve->add_option("--out", out, "output directory");
  solve->add_option("--seed", seed, "seed for randomized geometry");
  solve->add_flag("--hex-floats", hex, "write hex floats");

  auto* reproduce = app.add_subcommand("reproduce", "run a named example end to end");
  reproduce->add_option("--problem", problem, "example name")->required()->check(CLI::IsMember(mvga::example_names()));
  reproduce->add_option("--out", out, "output directory");
  reproduce->add_option("--seed", seed, "seed for randomized geometry");
  reproduce->add_flag("--hex-floats", hex, "write hex floats");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }

  const auto fmt = hex ? mvga::io::NumberFormat::kHex : mvga::io::NumberFormat::kDecimal;
  try {
    if (*basis) {
      std::cout << mvga::io::basis_to_json(mvga::make_basis(dim, degree)).dump() << "\n";
      return 0;
    }
    if (*fit) {
      json spec = {{"app", app_kind}, {"degree", degree}, {"nodes", std::filesystem::absolute(nodes).string()}};
      if (!values.empty()) spec["values"] = std::filesystem::absolute(values).string();
      if (order >= 0) {
        if (app_kind != "interpolation") throw UsageError("--order applies to interpolation only");
        spec["order"] = order;
      }
      if (!alpha.empty()) spec["alpha"] = alpha;
      if (app_kind.rfind("poisson", 0) == 0 && alpha.empty()) throw UsageError("--alpha is required for Poisson fits");
      if (seed) spec["seed"] = seed;
      return run_spec(spec, ".", out, hex);
    }
    if (*eval) {
      const auto model = mvga::io::model_from_json(mvga::io::read_json_file(model_path),
                                                   std::filesystem::path(model_path).parent_path().string());
      const auto table = mvga::io::read_csv(nodes);
      std::vector<Eigen::Index> cols;
      for (std::size_t c = 0; c < table.header.size(); ++c) {
        if (!table.header[c].empty() && table.header[c][0] == 'x') cols.push_back(static_cast<Eigen::Index>(c));
      }
      if (table.header.empty()) {
        for (Eigen::Index c = 0; c < table.data.cols(); ++c) cols.push_back(c);
      }
      if (static_cast<int>(cols.size()) != model.dim()) {
        throw mvga::InvalidArgument("node file has " + std::to_string(cols.size()) + " coordinate columns, model has d=" +
                                    std::to_string(model.dim()));
      }
      mvga::Matrix<double> coords(table.data.rows(), model.dim());
      for (int c = 0; c < model.dim(); ++c) coords.col(c) = table.data.col(cols[static_cast<std::size_t>(c)]);
      const mvga::NodeSet<double> at(coords);
      std::optional<mvga::DerivOrder> ord;
      if (order >= 0) ord = mvga::order_from_int(order);
      const auto result = mvga::eval_poly(model, at, ord);
      if (result.extrapolating) std::cerr << "warning: evaluation nodes lie well outside the fitting region\n";
      const std::string csv = mvga::io::eval_csv(at, result, fmt);
      if (out.empty()) std::cout << csv;
      else mvga::io::write_file_atomic(out, csv);
      return 0;
    }
    if (*solve) {
      json spec = mvga::io::read_json_file(problem);
      if (seed) spec["seed"] = seed;
      return run_spec(spec, std::filesystem::path(problem).parent_path().string(), out, hex);
    }
    if (*reproduce) {
      json spec = mvga::example_spec(problem);
      if (seed) spec["seed"] = seed;
      return run_spec(spec, ".", out, hex);
    }
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitUsage;
}
