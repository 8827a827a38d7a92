#pragma once

#include <Eigen/Sparse>

#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

#include "mvga/stacked.hpp"

namespace mvga {

/// weight * (block value at node). `node` is 1-based.
template <class S>
struct CollocationTerm {
  BlockId block;
  std::size_t node = 0;
  S weight{1};
};

template <class S>
struct CollocationRow {
  std::vector<CollocationTerm<S>> terms;
};

/// Sparse linear map L from the stacked space to R^r. The G-inner product is
/// <y, z>_G = (L y)^H (L z), i.e. G = L^H L, which is never formed.
template <class S>
class CollocationMap {
 public:
  using Sparse = Eigen::SparseMatrix<S, Eigen::RowMajor>;

  CollocationMap() = default;
  CollocationMap(StackedLayout layout, std::vector<CollocationRow<S>> rows)
      : layout_(layout), rows_(std::move(rows)) {
    if (rows_.empty()) throw InvalidArgument("CollocationMap: need at least one row");
    std::vector<Eigen::Triplet<S>> triplets;
    for (std::size_t r = 0; r < rows_.size(); ++r) {
      if (rows_[r].terms.empty()) throw InvalidArgument("CollocationMap: row without terms");
      for (const auto& term : rows_[r].terms) {
        if (term.node < 1 || term.node > layout_.m) throw InvalidArgument("CollocationMap: node index out of range");
        if (!layout_.contains(term.block)) {
          throw InvalidArgument("CollocationMap: block not present at this derivative order");
        }
        if (!std::isfinite(std::abs(term.weight))) throw InvalidArgument("CollocationMap: non-finite weight");
        triplets.emplace_back(static_cast<Eigen::Index>(r),
                              static_cast<Eigen::Index>(layout_.offset(term.block) + term.node - 1), term.weight);
      }
    }
    matrix_.resize(static_cast<Eigen::Index>(rows_.size()), static_cast<Eigen::Index>(layout_.size()));
    matrix_.setFromTriplets(triplets.begin(), triplets.end());
    matrix_.makeCompressed();
  }

  const StackedLayout& layout() const { return layout_; }
  std::size_t rows() const { return rows_.size(); }
  const std::vector<CollocationRow<S>>& row_list() const { return rows_; }
  const Sparse& matrix() const { return matrix_; }

 private:
  StackedLayout layout_;
  std::vector<CollocationRow<S>> rows_;
  Sparse matrix_;
};

namespace detail {
template <class S>
void check_map_length(const CollocationMap<S>& map, Eigen::Index n) {
  if (static_cast<std::size_t>(n) != map.layout().size()) {
    throw LayoutMismatch("collocation map: vector length does not match the map's layout");
  }
}
}  // namespace detail

/// L v for a raw stacked column (or each column of a matrix).
template <class S, class Derived>
Matrix<S> apply_map(const CollocationMap<S>& map, const Eigen::MatrixBase<Derived>& v) {
  detail::check_map_length(map, v.rows());
  return map.matrix() * v;
}

template <class S>
Vector<S> apply_map(const CollocationMap<S>& map, const StackedVector<S>& v) {
  if (!(v.layout() == map.layout())) throw LayoutMismatch("apply_map: layout mismatch");
  return map.matrix() * v.values();
}

/// <y, z>_G; conjugate-linear in y.
template <class S>
S g_inner(const CollocationMap<S>& map, const StackedVector<S>& y, const StackedVector<S>& z) {
  return apply_map(map, y).dot(apply_map(map, z));
}

template <class S>
double g_norm(const CollocationMap<S>& map, const StackedVector<S>& y) {
  return apply_map(map, y).norm();
}

/// Builders for the common maps.
template <class S>
CollocationMap<S> selection_map(StackedLayout layout, BlockId block) {
  std::vector<CollocationRow<S>> rows(layout.m);
  for (std::size_t j = 0; j < layout.m; ++j) rows[j].terms.push_back({block, j + 1, S{1}});
  return {layout, std::move(rows)};
}

/// One unit row per stacked entry: G = I.
template <class S>
CollocationMap<S> identity_map(StackedLayout layout) {
  std::vector<CollocationRow<S>> rows;
  rows.reserve(layout.size());
  for (std::size_t b = 0; b < layout.blocks(); ++b) {
    for (std::size_t j = 0; j < layout.m; ++j) {
      rows.push_back({{CollocationTerm<S>{block_at(layout.d, b), j + 1, S{1}}}});
    }
  }
  return {layout, std::move(rows)};
}

}  // namespace mvga
