#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <cstddef>
#include <string>
#include <type_traits>
#include <utility>

#include "mvga/error.hpp"

namespace mvga {

template <class S>
using Vector = Eigen::Matrix<S, Eigen::Dynamic, 1>;
template <class S>
using Matrix = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic>;

template <class S>
struct is_complex : std::false_type {};
template <class T>
struct is_complex<std::complex<T>> : std::true_type {};

/// Highest partial-derivative order carried in a stacked vector.
enum class DerivOrder : int { kValue = 0, kGradient = 1, kHessian = 2 };

DerivOrder order_from_int(int order);
inline int to_int(DerivOrder order) { return static_cast<int>(order); }

/// Number of stacked blocks: 1, 1+d, or 1+d+d(d+1)/2.
std::size_t stacked_dim(int d, DerivOrder order);

/// Identifies one block of the stacked layout. (0,0) is the function block,
/// (j,0) the first partial along x_j, (j,k) with j<=k the second partial.
/// Coordinates are 1-based.
struct BlockId {
  int first = 0;
  int second = 0;

  static BlockId value() { return {}; }
  static BlockId partial(int j) { return {j, 0}; }
  static BlockId partial(int j, int k) { return j <= k ? BlockId{j, k} : BlockId{k, j}; }

  int order() const { return first == 0 ? 0 : (second == 0 ? 1 : 2); }
  friend bool operator==(BlockId a, BlockId b) { return a.first == b.first && a.second == b.second; }
};

/// 0-based position of a block in the stacked order
/// [f | d1..dd | d11, d12, .., d1d, d22, .., ddd].
std::size_t block_index(int d, BlockId id);
BlockId block_at(int d, std::size_t b);

/// "f", "d1", "d12"; coordinates above 9 are written as "d3_12".
std::string block_name(int d, BlockId id);
BlockId parse_block_name(int d, const std::string& name);

/// Shape of a stacked vector: m nodes, dimension d, derivative order.
struct StackedLayout {
  std::size_t m = 0;
  int d = 0;
  DerivOrder order = DerivOrder::kValue;

  std::size_t blocks() const { return stacked_dim(d, order); }
  std::size_t size() const { return m * blocks(); }
  std::size_t offset(BlockId id) const { return block_index(d, id) * m; }
  bool contains(BlockId id) const {
    return id.order() <= to_int(order) && id.first <= d && id.second <= d;
  }
  friend bool operator==(const StackedLayout& a, const StackedLayout& b) {
    return a.m == b.m && a.d == b.d && a.order == b.order;
  }
};

/// m nodes in d dimensions, stored as an m x d matrix (row j is node j).
template <class S>
class NodeSet {
 public:
  NodeSet() = default;
  explicit NodeSet(Matrix<S> coords) : coords_(std::move(coords)) {
    if (coords_.rows() < 1) throw InvalidArgument("NodeSet: need at least one node");
    if (coords_.cols() < 1) throw InvalidArgument("NodeSet: dimension must be >= 1");
    if (!coords_.allFinite()) throw InvalidArgument("NodeSet: coordinates must be finite");
  }

  std::size_t size() const { return static_cast<std::size_t>(coords_.rows()); }
  int dim() const { return static_cast<int>(coords_.cols()); }
  const Matrix<S>& coords() const { return coords_; }
  auto node(std::size_t j) const { return coords_.row(static_cast<Eigen::Index>(j)); }
  /// Values of coordinate u (1-based) at every node.
  auto coordinate(int u) const { return coords_.col(u - 1); }

 private:
  Matrix<S> coords_;
};

/// Function values and partials at m nodes, block-stacked per StackedLayout.
template <class S>
class StackedVector {
 public:
  StackedVector() = default;
  explicit StackedVector(StackedLayout layout)
      : layout_(layout), values_(Vector<S>::Zero(static_cast<Eigen::Index>(layout.size()))) {}
  StackedVector(StackedLayout layout, Vector<S> values) : layout_(layout), values_(std::move(values)) {
    if (static_cast<std::size_t>(values_.size()) != layout_.size()) {
      throw LayoutMismatch("StackedVector: length does not match layout");
    }
  }

  const StackedLayout& layout() const { return layout_; }
  const Vector<S>& values() const { return values_; }
  Vector<S>& values() { return values_; }

  auto block(BlockId id) {
    return values_.segment(static_cast<Eigen::Index>(layout_.offset(id)), static_cast<Eigen::Index>(layout_.m));
  }
  auto block(BlockId id) const {
    return values_.segment(static_cast<Eigen::Index>(layout_.offset(id)), static_cast<Eigen::Index>(layout_.m));
  }

 private:
  StackedLayout layout_;
  Vector<S> values_;
};

template <class S>
StackedLayout layout_of(const NodeSet<S>& nodes, DerivOrder order) {
  return {nodes.size(), nodes.dim(), order};
}

/// Stacked evaluation of the constant polynomial 1: ones in the function
/// block, zeros everywhere else.
template <class S>
StackedVector<S> constant_column(const NodeSet<S>& nodes, DerivOrder order) {
  StackedVector<S> out(layout_of(nodes, order));
  out.block(BlockId::value()).setOnes();
  return out;
}

namespace detail {

template <class S>
void check_shift_args(const StackedLayout& layout, const NodeSet<S>& nodes, int u, Eigen::Index in_size,
                      Eigen::Index out_size) {
  if (u < 1 || u > layout.d) throw InvalidArgument("apply_shift: coordinate u out of range");
  if (layout.m != nodes.size() || layout.d != nodes.dim()) {
    throw LayoutMismatch("apply_shift: layout does not match node set");
  }
  if (static_cast<std::size_t>(in_size) != layout.size() || static_cast<std::size_t>(out_size) != layout.size()) {
    throw LayoutMismatch("apply_shift: vector length does not match layout");
  }
}

}  // namespace detail

/// out = X_u v: multiplication by x_u carried through the product rule,
///   f     <- x_u f
///   dj    <- x_u dj + [u=j] f
///   djk   <- x_u djk + [u=j] dk + [u=k] dj
/// `in` and `out` must not alias.
template <class S, class InDerived, class OutDerived>
void apply_shift(const StackedLayout& layout, const NodeSet<S>& nodes, int u,
                 const Eigen::MatrixBase<InDerived>& in, Eigen::MatrixBase<OutDerived> const& out_) {
  auto& out = const_cast<Eigen::MatrixBase<OutDerived>&>(out_);
  detail::check_shift_args(layout, nodes, u, in.size(), out.size());
  const auto m = static_cast<Eigen::Index>(layout.m);
  const int d = layout.d;
  const auto chi = nodes.coordinate(u).array();
  auto seg = [&](auto& v, BlockId id) { return v.segment(static_cast<Eigen::Index>(layout.offset(id)), m); };

  seg(out, BlockId::value()).array() = chi * seg(in, BlockId::value()).array();
  if (layout.order == DerivOrder::kValue) return;

  for (int j = 1; j <= d; ++j) {
    auto o = seg(out, BlockId::partial(j));
    o.array() = chi * seg(in, BlockId::partial(j)).array();
    if (j == u) o += seg(in, BlockId::value());
  }
  if (layout.order == DerivOrder::kGradient) return;

  for (int j = 1; j <= d; ++j) {
    for (int k = j; k <= d; ++k) {
      auto o = seg(out, BlockId::partial(j, k));
      o.array() = chi * seg(in, BlockId::partial(j, k)).array();
      if (j == u) o += seg(in, BlockId::partial(k));
      if (k == u) o += seg(in, BlockId::partial(j));
    }
  }
}

template <class S>
StackedVector<S> apply_shift(int u, const StackedVector<S>& v, const NodeSet<S>& nodes) {
  StackedVector<S> out(v.layout());
  apply_shift(v.layout(), nodes, u, v.values(), out.values());
  return out;
}

}  // namespace mvga
