#include "mvga/basis.hpp"

#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <unordered_map>

#include "mvga/error.hpp"

namespace mvga {
namespace {

struct ExponentHash {
  std::size_t operator()(const std::vector<int>& e) const noexcept {
    std::size_t h = 1469598103934665603ull;
    for (int v : e) {
      h ^= static_cast<std::size_t>(v) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    }
    return h;
  }
};

// Appends every exponent vector of total degree `remaining` on coordinates
// [pos, d) in descending lexicographic order.
void append_degree(std::vector<int>& current, std::size_t pos, int remaining,
                   std::vector<MultiIndex>& out) {
  if (pos + 1 == current.size()) {
    current[pos] = remaining;
    out.emplace_back(current);
    return;
  }
  for (int a = remaining; a >= 0; --a) {
    current[pos] = a;
    append_degree(current, pos + 1, remaining - a, out);
  }
}

}  // namespace

MultiIndex::MultiIndex(std::vector<int> exponents) : exponents_(std::move(exponents)) {
  if (exponents_.empty()) throw InvalidArgument("MultiIndex: dimension must be >= 1");
  for (int e : exponents_) {
    if (e < 0) throw InvalidArgument("MultiIndex: exponents must be nonnegative");
  }
  total_degree_ = std::accumulate(exponents_.begin(), exponents_.end(), 0);
}

bool precedes(const MultiIndex& a, const MultiIndex& b) {
  if (a.dim() != b.dim()) throw InvalidArgument("precedes: dimension mismatch");
  if (a.total_degree() != b.total_degree()) return a.total_degree() < b.total_degree();
  for (std::size_t j = 0; j < a.dim(); ++j) {
    if (a[j] != b[j]) return a[j] > b[j];
  }
  return false;
}

std::size_t basis_size(int d, int n) {
  if (d < 1) throw InvalidArgument("basis_size: d must be >= 1");
  if (n < 0) throw InvalidArgument("basis_size: n must be >= 0");
  // C(n+d, d) = prod_{i=1..k} (N-k+i)/i with k = min(n, d); every partial
  // product is itself a binomial coefficient, so the division is exact.
  const auto big = static_cast<unsigned long long>(n) + static_cast<unsigned long long>(d);
  const auto k = static_cast<unsigned long long>(std::min(n, d));
  unsigned __int128 result = 1;
  for (unsigned long long i = 1; i <= k; ++i) {
    result = result * (big - k + i);
    if (result > std::numeric_limits<std::size_t>::max()) {
      throw std::overflow_error("basis_size: C(" + std::to_string(big) + ", " + std::to_string(d) +
                                ") overflows size_t");
    }
    result /= i;
  }
  return static_cast<std::size_t>(result);
}

std::size_t GrevlexBasis::position(const MultiIndex& alpha) const {
  if (alpha.dim() != static_cast<std::size_t>(d_) || alpha.total_degree() > n_) return 0;
  // Offset of the degree block plus rank inside it.
  std::size_t pos = alpha.total_degree() == 0 ? 0 : basis_size(d_, alpha.total_degree() - 1);
  int remaining = alpha.total_degree();
  for (int j = 0; j + 1 < d_; ++j) {
    // Skip all vectors whose j-th exponent exceeds alpha_j.
    for (int a = remaining; a > alpha[j]; --a) {
      const int rest = remaining - a;
      const int slots = d_ - j - 1;
      pos += basis_size(slots, rest) - (rest == 0 ? 0 : basis_size(slots, rest - 1));
    }
    remaining -= alpha[j];
  }
  return pos + 1;
}

GrevlexBasis enumerate(int d, int n) {
  GrevlexBasis basis;
  const std::size_t g = basis_size(d, n);
  basis.d_ = d;
  basis.n_ = n;
  basis.indices_.reserve(g);
  std::vector<int> current(static_cast<std::size_t>(d), 0);
  for (int k = 0; k <= n; ++k) append_degree(current, 0, k, basis.indices_);
  return basis;
}

GrevlexBasis build_parent_table(GrevlexBasis basis) {
  const std::size_t g = basis.indices_.size();
  if (g == 0) throw InvalidArgument("build_parent_table: empty basis");
  std::unordered_map<std::vector<int>, std::size_t, ExponentHash> lookup;
  lookup.reserve(g);
  for (std::size_t i = 0; i < g; ++i) lookup.emplace(basis.indices_[i].exponents(), i + 1);

  basis.parent_s_.assign(g - 1, 0);
  basis.parent_u_.assign(g - 1, 0);
  for (std::size_t i = 2; i <= g; ++i) {
    std::vector<int> e = basis.indices_[i - 1].exponents();
    std::size_t best_s = 0;
    int best_u = 0;
    for (int u = 0; u < basis.d_; ++u) {
      if (e[u] == 0) continue;
      --e[u];
      const auto it = lookup.find(e);
      ++e[u];
      if (it == lookup.end()) continue;
      if (best_s == 0 || it->second < best_s) {
        best_s = it->second;
        best_u = u + 1;
      }
    }
    if (best_s == 0 || best_s >= i) {
      throw std::logic_error("build_parent_table: basis is not downward closed");
    }
    basis.parent_s_[i - 2] = best_s;
    basis.parent_u_[i - 2] = best_u;
  }
  return basis;
}

GrevlexBasis make_basis(int d, int n) { return build_parent_table(enumerate(d, n)); }

}  // namespace mvga
