#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <optional>

#include "mvga/arnoldi.hpp"
#include "mvga/parallel.hpp"

namespace mvga {

/// Basis columns xi_1..xi_t evaluated (with partials) on a new node set.
template <class S>
struct EvalTable {
  Matrix<S> e;
  StackedLayout layout;
  /// Some node lies more than 10% of the fitting bounding-box width outside it.
  bool extrapolating = false;
};

/// p and its partials on a node set, laid out like a StackedVector.
template <class S>
struct StackedOutput {
  StackedVector<S> values;
  bool extrapolating = false;

  const StackedLayout& layout() const { return values.layout(); }
  auto fun() const { return values.block(BlockId::value()); }
  auto grad(int j) const { return values.block(BlockId::partial(j)); }
  auto hess(int j, int k) const { return values.block(BlockId::partial(j, k)); }
};

namespace detail {

template <class S>
double real_part(const S& v) {
  if constexpr (is_complex<S>::value) {
    return v.real();
  } else {
    return static_cast<double>(v);
  }
}

template <class S>
bool outside_fitting_box(const NodeSet<S>& fitting, const NodeSet<S>& nodes) {
  for (int u = 0; u < fitting.dim(); ++u) {
    double lo = real_part(fitting.coords()(0, u)), hi = lo;
    for (Eigen::Index j = 0; j < fitting.coords().rows(); ++j) {
      lo = std::min(lo, real_part(fitting.coords()(j, u)));
      hi = std::max(hi, real_part(fitting.coords()(j, u)));
    }
    const double margin = 0.1 * (hi - lo);
    for (Eigen::Index j = 0; j < nodes.coords().rows(); ++j) {
      const double x = real_part(nodes.coords()(j, u));
      if (x < lo - margin || x > hi + margin) return true;
    }
  }
  return false;
}

template <class S>
void check_eval_args(const FitModel<S>& model, const NodeSet<S>& nodes) {
  if (nodes.dim() != model.dim()) throw InvalidArgument("eval: node dimension does not match the model");
  if (model.t < 1 || model.rtilde.rows() != static_cast<Eigen::Index>(model.t)) {
    throw InvalidArgument("eval: model has no basis columns");
  }
  for (Eigen::Index i = 0; i < model.rtilde.rows(); ++i) {
    const S rii = model.rtilde(i, i);
    if (!(real_part(rii) > 0.0) || std::abs(rii - S(real_part(rii))) != 0.0) {
      throw InvalidArgument("eval: rtilde diagonal must be positive");
    }
  }
}

// Runs the recurrence on one contiguous chunk of nodes. Visitor receives each
// finished column (0-based index, column vector in the chunk layout).
template <class S, class Visitor>
void eval_chunk(const FitModel<S>& model, const NodeSet<S>& chunk, DerivOrder order, Matrix<S>& e,
                Visitor&& visit) {
  const StackedLayout layout = layout_of(chunk, order);
  const auto t = static_cast<Eigen::Index>(model.t);
  const auto& r = model.rtilde;
  e.setZero(static_cast<Eigen::Index>(layout.size()), t);
  e.col(0).segment(0, static_cast<Eigen::Index>(layout.m)).setConstant(S(1) / r(0, 0));
  visit(Eigen::Index{0}, e.col(0));
  Vector<S> w(e.rows());
  for (Eigen::Index i = 1; i < t; ++i) {
    const std::size_t pos = static_cast<std::size_t>(i) + 1;
    const auto s_i = static_cast<Eigen::Index>(model.basis.parent_s(pos)) - 1;
    apply_shift(layout, chunk, model.basis.parent_u(pos), e.col(s_i), w);
    // Column-by-column update keeps every row's arithmetic independent of
    // how nodes are split across threads.
    for (Eigen::Index k = 0; k < i; ++k) w -= r(k, i) * e.col(k);
    e.col(i) = w / r(i, i);
    visit(i, e.col(i));
  }
}

template <class S>
NodeSet<S> node_slice(const NodeSet<S>& nodes, std::size_t begin, std::size_t end) {
  return NodeSet<S>(nodes.coords().middleRows(static_cast<Eigen::Index>(begin),
                                              static_cast<Eigen::Index>(end - begin)));
}

// Scatters a chunk-layout column block into the full layout.
template <class S, class Src, class Dst>
void scatter_rows(const StackedLayout& full, std::size_t begin, std::size_t count, const Src& src, Dst&& dst) {
  const auto m = static_cast<Eigen::Index>(full.m);
  const auto c = static_cast<Eigen::Index>(count);
  for (std::size_t b = 0; b < full.blocks(); ++b) {
    const auto bi = static_cast<Eigen::Index>(b);
    dst.middleRows(bi * m + static_cast<Eigen::Index>(begin), c) = src.middleRows(bi * c, c);
  }
}

}  // namespace detail

/// Evaluates the fitted basis on new nodes through the recurrence
///   rtilde(i,i) xi_i = X_{u_i} xi_{s_i} - sum_{k<i} rtilde(k,i) xi_k.
/// `order` defaults to the model's fitting order; any order may be requested
/// since the recurrence only depends on rtilde and the parent table.
template <class S>
EvalTable<S> eval_basis(const FitModel<S>& model, const NodeSet<S>& nodes,
                        std::optional<DerivOrder> order = std::nullopt, unsigned threads = worker_threads()) {
  detail::check_eval_args(model, nodes);
  const DerivOrder ord = order.value_or(model.order);
  EvalTable<S> table;
  table.layout = layout_of(nodes, ord);
  table.e.resize(static_cast<Eigen::Index>(table.layout.size()), static_cast<Eigen::Index>(model.t));
  table.extrapolating = detail::outside_fitting_box(model.nodes, nodes);
  parallel_chunks(nodes.size(), threads, [&](std::size_t begin, std::size_t end) {
    if (begin == end) return;
    const NodeSet<S> chunk = detail::node_slice(nodes, begin, end);
    Matrix<S> e;
    detail::eval_chunk(model, chunk, ord, e, [](Eigen::Index, const auto&) {});
    detail::scatter_rows<S>(table.layout, begin, end - begin, e, table.e);
  });
  return table;
}

/// p(S) = E c, folded column by column as the basis is generated.
template <class S>
StackedOutput<S> eval_poly(const FitModel<S>& model, const NodeSet<S>& nodes,
                           std::optional<DerivOrder> order = std::nullopt, unsigned threads = worker_threads()) {
  if (!model.coeffs) throw InvalidArgument("eval_poly: model has no coefficients");
  if (static_cast<std::size_t>(model.coeffs->size()) != model.t) {
    throw InvalidArgument("eval_poly: coefficient count does not match the basis size");
  }
  detail::check_eval_args(model, nodes);
  const DerivOrder ord = order.value_or(model.order);
  StackedOutput<S> out{StackedVector<S>(layout_of(nodes, ord)), detail::outside_fitting_box(model.nodes, nodes)};
  const Vector<S>& c = *model.coeffs;
  parallel_chunks(nodes.size(), threads, [&](std::size_t begin, std::size_t end) {
    if (begin == end) return;
    const NodeSet<S> chunk = detail::node_slice(nodes, begin, end);
    Matrix<S> e;
    Vector<S> acc = Vector<S>::Zero(static_cast<Eigen::Index>(layout_of(chunk, ord).size()));
    detail::eval_chunk(model, chunk, ord, e, [&](Eigen::Index i, const auto& col) { acc += c(i) * col; });
    detail::scatter_rows<S>(out.layout(), begin, end - begin, acc, out.values.values());
  });
  return out;
}

}  // namespace mvga
