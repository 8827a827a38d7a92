#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "mvga/arnoldi.hpp"
#include "mvga/collocation.hpp"
#include "mvga/stacked.hpp"

namespace mvga {

/// Contiguous range of fitting nodes with a role (interior, dirichlet, ...).
struct NodeGroup {
  std::string name;
  std::size_t first = 1;  ///< 1-based index of the first node
  std::size_t count = 0;
};

/// min_c || A c - b || where A = L Q. The map doubles as the fitting G.
struct LsProblem {
  NodeSet<double> nodes;
  DerivOrder order = DerivOrder::kValue;
  CollocationMap<double> map;
  Vector<double> rhs;
  std::vector<NodeGroup> partition;

  const NodeGroup* group(const std::string& name) const;
};

enum class SolvePath { kOrthonormal, kDenseQr };
std::string to_string(SolvePath path);

struct SolveResult {
  Vector<double> coeffs;
  SolvePath path = SolvePath::kOrthonormal;
  /// ||A^H (A c - b)||_inf
  double residual_orthogonality = 0.0;
  /// ||A c - b||_inf
  double residual_inf = 0.0;
};

/// c = A^H b, falling back to a dense QR least-squares solve when
/// ||A^H (A c - b)||_inf > 1e-8 ||b||_inf.
SolveResult solve_coefficients(const FitModel<double>& model, const LsProblem& problem);

/// One function row per node (unit weight); rhs = f.
LsProblem build_interpolation(const NodeSet<double>& nodes, const Vector<double>& f_values,
                              DerivOrder order = DerivOrder::kHessian);

/// Function rows at every node (interior first, then boundary), followed by
/// one row group per coordinate j holding d_j f at the boundary nodes.
/// `f_values` covers interior then boundary; `boundary_gradients` is m1 x d.
LsProblem build_hermite(const NodeSet<double>& interior, const NodeSet<double>& boundary,
                        const Vector<double>& f_values, const Matrix<double>& boundary_gradients);

/// u + alpha Lap u = f inside, u = h on the boundary. `alpha` is sampled at
/// the interior nodes.
LsProblem build_poisson_dirichlet(const NodeSet<double>& interior, const NodeSet<double>& boundary,
                                  const Vector<double>& alpha, const Vector<double>& f_values,
                                  const Vector<double>& h_values);

/// As build_poisson_dirichlet, plus Neumann rows n . grad u = h2 on a third
/// node group. `normals` is m_neumann x d with unit rows.
LsProblem build_poisson_mixed(const NodeSet<double>& interior, const NodeSet<double>& dirichlet,
                              const NodeSet<double>& neumann, const Matrix<double>& normals,
                              const Vector<double>& alpha, const Vector<double>& f_values,
                              const Vector<double>& h1_values, const Vector<double>& h2_values);

/// Fit with problem.map as G, then solve; coefficients are stored on the model.
struct FittedProblem {
  FitModel<double> model;
  SolveResult solve;
};
FittedProblem fit_and_solve(const LsProblem& problem, int degree, const FitOptions& options = {});

/// Stacks node sets row-wise (all must share d).
NodeSet<double> concat_nodes(const std::vector<const NodeSet<double>*>& parts);

}  // namespace mvga
