#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <string>

#include "mvga/basis.hpp"
#include "mvga/collocation.hpp"
#include "mvga/stacked.hpp"

namespace mvga {

struct FitOptions {
  /// Breakdown when the orthogonalized residual drops to this fraction of
  /// the shifted column's G-norm.
  double breakdown_tol = 1e-13;
  /// Gram-Schmidt passes per column.
  int passes = 2;
  /// Keep Q after fitting. The coefficient solve needs it (or re-evaluates).
  bool retain_q = true;
};

/// Output of the fitting stage: the triangular recurrence coefficients and
/// (optionally) the G-orthonormal stacked columns Q = [q_1 .. q_t].
template <class S>
struct FitModel {
  GrevlexBasis basis;
  NodeSet<S> nodes;
  DerivOrder order = DerivOrder::kValue;
  CollocationMap<S> map;
  std::size_t t = 0;
  Matrix<S> rtilde;
  std::optional<Matrix<S>> q;
  std::optional<Vector<S>> coeffs;
  /// 1-based column at which the residual vanished, if any.
  std::optional<std::size_t> breakdown_column;

  std::size_t g() const { return basis.size(); }
  int dim() const { return basis.dim(); }
  StackedLayout layout() const { return layout_of(nodes, order); }
};

/// Shift-and-orthogonalize fit: q_1 = e/||e||_G, and for i >= 2
/// k_i = X_{u_i} q_{s_i} is G-orthogonalized against q_1..q_{i-1} with
/// `passes` classical Gram-Schmidt sweeps whose projections accumulate into
/// rtilde(1:i-1, i).
template <class S>
FitModel<S> fit(const NodeSet<S>& nodes, const GrevlexBasis& basis, const CollocationMap<S>& map, DerivOrder order,
                const FitOptions& options = {}) {
  if (!basis.has_parents()) throw InvalidArgument("fit: basis has no parent table");
  if (basis.dim() != nodes.dim()) throw InvalidArgument("fit: basis and nodes differ in dimension");
  const StackedLayout layout = layout_of(nodes, order);
  if (!(map.layout() == layout)) throw LayoutMismatch("fit: map layout does not match nodes/order");
  if (options.passes < 1) throw InvalidArgument("fit: need at least one Gram-Schmidt pass");

  const auto n_rows = static_cast<Eigen::Index>(layout.size());
  const auto g = static_cast<Eigen::Index>(basis.size());
  const auto& L = map.matrix();

  FitModel<S> model;
  model.basis = basis;
  model.nodes = nodes;
  model.order = order;
  model.map = map;

  Matrix<S> q = Matrix<S>::Zero(n_rows, g);
  Matrix<S> lq = Matrix<S>::Zero(static_cast<Eigen::Index>(map.rows()), g);
  Matrix<S> r = Matrix<S>::Zero(g, g);

  const StackedVector<S> e = constant_column(nodes, order);
  Vector<S> le = L * e.values();
  const double r11 = le.norm();
  if (!std::isfinite(r11)) throw NumericError("fit: non-finite norm of the constant column");
  if (r11 == 0.0) throw DegenerateMap("fit: the constant polynomial has zero G-norm");
  r(0, 0) = S(r11);
  q.col(0) = e.values() / S(r11);
  lq.col(0) = le / S(r11);

  Eigen::Index t = g;
  Vector<S> w(n_rows);
  Vector<S> lw;
  for (Eigen::Index i = 1; i < g; ++i) {
    const std::size_t pos = static_cast<std::size_t>(i) + 1;
    const auto s_i = static_cast<Eigen::Index>(basis.parent_s(pos)) - 1;
    apply_shift(layout, nodes, basis.parent_u(pos), q.col(s_i), w);
    lw = L * w;
    const double knorm = lw.norm();
    for (int pass = 0; pass < options.passes; ++pass) {
      const Vector<S> proj = lq.leftCols(i).adjoint() * lw;
      w.noalias() -= q.leftCols(i) * proj;
      lw = L * w;
      r.col(i).head(i) += proj;
    }
    const double rii = lw.norm();
    if (!std::isfinite(rii) || !std::isfinite(knorm)) {
      throw NumericError("fit: non-finite values at column " + std::to_string(pos));
    }
    if (rii <= options.breakdown_tol * knorm) {
      t = i;
      model.breakdown_column = pos;
      break;
    }
    r(i, i) = S(rii);
    q.col(i) = w / S(rii);
    lq.col(i) = lw / S(rii);
  }

  model.t = static_cast<std::size_t>(t);
  model.rtilde = r.topLeftCorner(t, t);
  if (options.retain_q) model.q = q.leftCols(t);
  return model;
}

/// The map applied to every retained column, A = L Q (r x t).
template <class S>
Matrix<S> mapped_columns(const FitModel<S>& model) {
  if (!model.q) throw InvalidArgument("mapped_columns: Q was not retained");
  return model.map.matrix() * (*model.q);
}

/// max |<q_i, q_j>_G - delta_ij| over the retained columns.
template <class S>
double gram_check(const FitModel<S>& model) {
  const Matrix<S> a = mapped_columns(model);
  const Matrix<S> gram = a.adjoint() * a;
  return (gram - Matrix<S>::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff();
}

}  // namespace mvga
