#include "mvga/applications.hpp"

#include <cmath>
#include <string>

#include "mvga/eval.hpp"

namespace mvga {
namespace {

void require_length(const char* what, Eigen::Index got, std::size_t want) {
  if (static_cast<std::size_t>(got) != want) {
    throw InvalidArgument(std::string(what) + ": expected " + std::to_string(want) + " values, got " +
                          std::to_string(got));
  }
}

void require_finite(const char* what, const Vector<double>& v) {
  if (!v.allFinite()) throw InvalidArgument(std::string(what) + ": values must be finite");
}

using Row = CollocationRow<double>;

Row laplace_row(int d, std::size_t node, double alpha) {
  Row row;
  row.terms.push_back({BlockId::value(), node, 1.0});
  if (alpha != 0.0) {
    for (int j = 1; j <= d; ++j) row.terms.push_back({BlockId::partial(j, j), node, alpha});
  }
  return row;
}

}  // namespace

const NodeGroup* LsProblem::group(const std::string& name) const {
  for (const auto& g : partition) {
    if (g.name == name) return &g;
  }
  return nullptr;
}

std::string to_string(SolvePath path) {
  return path == SolvePath::kOrthonormal ? "orthonormal" : "dense_qr";
}

NodeSet<double> concat_nodes(const std::vector<const NodeSet<double>*>& parts) {
  Eigen::Index rows = 0;
  int d = 0;
  for (const auto* p : parts) {
    if (p->size() == 0) continue;
    if (d != 0 && p->dim() != d) throw InvalidArgument("concat_nodes: dimension mismatch");
    d = p->dim();
    rows += static_cast<Eigen::Index>(p->size());
  }
  Matrix<double> all(rows, d);
  Eigen::Index at = 0;
  for (const auto* p : parts) {
    if (p->size() == 0) continue;
    all.middleRows(at, static_cast<Eigen::Index>(p->size())) = p->coords();
    at += static_cast<Eigen::Index>(p->size());
  }
  return NodeSet<double>(std::move(all));
}

SolveResult solve_coefficients(const FitModel<double>& model, const LsProblem& problem) {
  if (problem.map.rows() != model.map.rows() || !(problem.map.layout() == model.map.layout())) {
    throw InvalidArgument("solve_coefficients: problem map does not match the fitted map");
  }
  require_length("solve_coefficients: rhs", problem.rhs.size(), problem.map.rows());
  const Matrix<double> a = model.q ? mapped_columns(model)
                                   : Matrix<double>(problem.map.matrix() * eval_basis(model, model.nodes).e);
  const Vector<double>& b = problem.rhs;

  SolveResult out;
  out.coeffs = a.transpose() * b;
  const double bnorm = b.size() ? b.cwiseAbs().maxCoeff() : 0.0;
  Vector<double> residual = a * out.coeffs - b;
  out.residual_orthogonality = (a.transpose() * residual).cwiseAbs().maxCoeff();
  if (!(out.residual_orthogonality <= 1e-8 * bnorm)) {
    out.coeffs = a.colPivHouseholderQr().solve(b);
    out.path = SolvePath::kDenseQr;
    residual = a * out.coeffs - b;
    out.residual_orthogonality = (a.transpose() * residual).cwiseAbs().maxCoeff();
  }
  out.residual_inf = residual.size() ? residual.cwiseAbs().maxCoeff() : 0.0;
  return out;
}

LsProblem build_interpolation(const NodeSet<double>& nodes, const Vector<double>& f_values, DerivOrder order) {
  require_length("build_interpolation: f", f_values.size(), nodes.size());
  require_finite("build_interpolation: f", f_values);
  LsProblem p;
  p.nodes = nodes;
  p.order = order;
  p.map = selection_map<double>(layout_of(nodes, order), BlockId::value());
  p.rhs = f_values;
  p.partition = {{"all", 1, nodes.size()}};
  return p;
}

LsProblem build_hermite(const NodeSet<double>& interior, const NodeSet<double>& boundary,
                        const Vector<double>& f_values, const Matrix<double>& boundary_gradients) {
  const std::size_t m0 = interior.size();
  const std::size_t m1 = boundary.size();
  const int d = interior.dim();
  require_length("build_hermite: f", f_values.size(), m0 + m1);
  require_finite("build_hermite: f", f_values);
  if (m1 > 0 && (static_cast<std::size_t>(boundary_gradients.rows()) != m1 || boundary_gradients.cols() != d)) {
    throw InvalidArgument("build_hermite: boundary gradients must be m1 x d");
  }
  if (m1 > 0 && !boundary_gradients.allFinite()) throw InvalidArgument("build_hermite: gradients must be finite");

  LsProblem p;
  p.nodes = m1 > 0 ? concat_nodes({&interior, &boundary}) : interior;
  p.order = DerivOrder::kGradient;
  const std::size_t m = m0 + m1;
  std::vector<Row> rows;
  rows.reserve(m + m1 * static_cast<std::size_t>(d));
  for (std::size_t j = 1; j <= m; ++j) rows.push_back({{{BlockId::value(), j, 1.0}}});
  p.rhs.resize(static_cast<Eigen::Index>(m + m1 * static_cast<std::size_t>(d)));
  p.rhs.head(static_cast<Eigen::Index>(m)) = f_values;
  Eigen::Index at = static_cast<Eigen::Index>(m);
  for (int u = 1; u <= d && m1 > 0; ++u) {
    for (std::size_t j = 0; j < m1; ++j) {
      rows.push_back({{{BlockId::partial(u), m0 + j + 1, 1.0}}});
      p.rhs(at++) = boundary_gradients(static_cast<Eigen::Index>(j), u - 1);
    }
  }
  p.map = CollocationMap<double>(layout_of(p.nodes, p.order), std::move(rows));
  p.partition = {{"interior", 1, m0}};
  if (m1 > 0) p.partition.push_back({"boundary", m0 + 1, m1});
  return p;
}

LsProblem build_poisson_dirichlet(const NodeSet<double>& interior, const NodeSet<double>& boundary,
                                  const Vector<double>& alpha, const Vector<double>& f_values,
                                  const Vector<double>& h_values) {
  return build_poisson_mixed(interior, boundary, NodeSet<double>(), Matrix<double>(0, interior.dim()), alpha,
                             f_values, h_values, Vector<double>());
}

LsProblem build_poisson_mixed(const NodeSet<double>& interior, const NodeSet<double>& dirichlet,
                              const NodeSet<double>& neumann, const Matrix<double>& normals,
                              const Vector<double>& alpha, const Vector<double>& f_values,
                              const Vector<double>& h1_values, const Vector<double>& h2_values) {
  const std::size_t m0 = interior.size();
  const std::size_t m1 = dirichlet.size();
  const std::size_t m2 = neumann.size();
  const int d = interior.dim();
  if ((m1 > 0 && dirichlet.dim() != d) || (m2 > 0 && neumann.dim() != d)) {
    throw InvalidArgument("build_poisson: node groups differ in dimension");
  }
  require_length("build_poisson: alpha", alpha.size(), m0);
  require_length("build_poisson: f", f_values.size(), m0);
  require_length("build_poisson: h1", h1_values.size(), m1);
  require_length("build_poisson: h2", h2_values.size(), m2);
  if (!alpha.allFinite()) throw InvalidArgument("build_poisson: alpha must be finite at every interior node");
  require_finite("build_poisson: f", f_values);
  require_finite("build_poisson: h1", h1_values);
  require_finite("build_poisson: h2", h2_values);
  if (static_cast<std::size_t>(normals.rows()) != m2 || (m2 > 0 && normals.cols() != d)) {
    throw InvalidArgument("build_poisson: normals must be m_neumann x d");
  }
  for (std::size_t j = 0; j < m2; ++j) {
    const double len = normals.row(static_cast<Eigen::Index>(j)).norm();
    if (!(std::abs(len - 1.0) <= 1e-12)) {
      throw InvalidArgument("build_poisson: normal " + std::to_string(j + 1) + " is not unit length");
    }
  }

  LsProblem p;
  p.nodes = concat_nodes({&interior, &dirichlet, &neumann});
  p.order = DerivOrder::kHessian;
  std::vector<Row> rows;
  rows.reserve(m0 + m1 + m2);
  p.rhs.resize(static_cast<Eigen::Index>(m0 + m1 + m2));
  for (std::size_t j = 0; j < m0; ++j) rows.push_back(laplace_row(d, j + 1, alpha(static_cast<Eigen::Index>(j))));
  for (std::size_t j = 0; j < m1; ++j) rows.push_back({{{BlockId::value(), m0 + j + 1, 1.0}}});
  for (std::size_t j = 0; j < m2; ++j) {
    Row row;
    for (int u = 1; u <= d; ++u) {
      const double w = normals(static_cast<Eigen::Index>(j), u - 1);
      if (w != 0.0) row.terms.push_back({BlockId::partial(u), m0 + m1 + j + 1, w});
    }
    rows.push_back(std::move(row));
  }
  p.rhs << f_values, h1_values, h2_values;
  p.map = CollocationMap<double>(layout_of(p.nodes, p.order), std::move(rows));
  p.partition = {{"interior", 1, m0}, {"dirichlet", m0 + 1, m1}};
  if (m2 > 0) p.partition.push_back({"neumann", m0 + m1 + 1, m2});
  return p;
}

FittedProblem fit_and_solve(const LsProblem& problem, int degree, const FitOptions& options) {
  const GrevlexBasis basis = make_basis(problem.nodes.dim(), degree);
  FitOptions opts = options;
  opts.retain_q = true;
  FittedProblem out{fit(problem.nodes, basis, problem.map, problem.order, opts), {}};
  out.solve = solve_coefficients(out.model, problem);
  out.model.coeffs = out.solve.coeffs;
  if (!options.retain_q) out.model.q.reset();
  return out;
}

}  // namespace mvga
