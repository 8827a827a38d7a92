#pragma once

#include <cstddef>
#include <vector>

namespace mvga {

/// Exponent vector of a monomial x^alpha.
class MultiIndex {
 public:
  explicit MultiIndex(std::vector<int> exponents);

  std::size_t dim() const { return exponents_.size(); }
  int total_degree() const { return total_degree_; }
  int operator[](std::size_t j) const { return exponents_[j]; }
  const std::vector<int>& exponents() const { return exponents_; }

  friend bool operator==(const MultiIndex& a, const MultiIndex& b) {
    return a.exponents_ == b.exponents_;
  }

 private:
  std::vector<int> exponents_;
  int total_degree_ = 0;
};

/// Graded ordering: lower total degree first; equal degrees are ordered by the
/// first coordinate where the exponents differ, larger exponent first.
bool precedes(const MultiIndex& a, const MultiIndex& b);

/// C(n+d, d). Throws std::overflow_error if the count does not fit in size_t.
std::size_t basis_size(int d, int n);

/// Ordered total-degree monomial basis together with its generating parents.
///
/// Positions are 1-based, matching the model file: `index(1)` is the constant
/// monomial, and for i >= 2 `index(i) = index(parent_s(i)) + e_{parent_u(i)}`,
/// with parent_s(i) the smallest position for which such a u exists.
class GrevlexBasis {
 public:
  GrevlexBasis() = default;

  int dim() const { return d_; }
  int degree() const { return n_; }
  std::size_t size() const { return indices_.size(); }

  const MultiIndex& index(std::size_t i) const { return indices_.at(i - 1); }
  const std::vector<MultiIndex>& indices() const { return indices_; }

  bool has_parents() const { return !indices_.empty() && parent_s_.size() + 1 == indices_.size(); }
  /// Minimal parent position s_i (1-based), valid for i in [2, g].
  std::size_t parent_s(std::size_t i) const { return parent_s_.at(i - 2); }
  /// Coordinate u_i in [1, d], valid for i in [2, g].
  int parent_u(std::size_t i) const { return parent_u_.at(i - 2); }

  const std::vector<std::size_t>& parent_s_table() const { return parent_s_; }
  const std::vector<int>& parent_u_table() const { return parent_u_; }

  /// 1-based position of a multi-index, or 0 if it is not in the basis.
  std::size_t position(const MultiIndex& alpha) const;

  friend GrevlexBasis enumerate(int d, int n);
  friend GrevlexBasis build_parent_table(GrevlexBasis basis);

 private:
  int d_ = 0;
  int n_ = 0;
  std::vector<MultiIndex> indices_;
  std::vector<std::size_t> parent_s_;
  std::vector<int> parent_u_;
};

/// All multi-indices with |alpha| <= n, sorted by `precedes`. No parent table.
GrevlexBasis enumerate(int d, int n);

/// Fills the parent table of an enumerated basis.
GrevlexBasis build_parent_table(GrevlexBasis basis);

/// enumerate + build_parent_table.
GrevlexBasis make_basis(int d, int n);

}  // namespace mvga
