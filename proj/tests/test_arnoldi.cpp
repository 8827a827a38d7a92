#include <doctest.h>

#include <complex>
#include <numbers>
#include <random>

#include "mvga/applications.hpp"
#include "mvga/arnoldi.hpp"
#include "oracles.hpp"

using mvga::BlockId;
using mvga::DerivOrder;
using mvga::Matrix;
using mvga::NodeSet;
using mvga::Vector;
using cd = std::complex<double>;

namespace {

template <class S>
mvga::CollocationMap<S> fun_rows(const NodeSet<S>& nodes, DerivOrder order) {
  return mvga::selection_map<S>(mvga::layout_of(nodes, order), BlockId::value());
}

NodeSet<double> line(std::size_t m, double lo = -1.0, double hi = 1.0) {
  Matrix<double> c(static_cast<Eigen::Index>(m), 1);
  for (std::size_t i = 0; i < m; ++i) c(static_cast<Eigen::Index>(i), 0) = lo + (hi - lo) * double(i) / double(m - 1);
  return NodeSet<double>(c);
}

}  // namespace

TEST_CASE("roots of unity give a diagonal R") {
  // z^k are orthogonal on the m-th roots of unity, so every projection vanishes.
  const std::size_t m = 16;
  Matrix<cd> c(m, 1);
  for (std::size_t j = 0; j < m; ++j) c(static_cast<Eigen::Index>(j), 0) = std::polar(1.0, 2 * std::numbers::pi * j / m);
  const NodeSet<cd> nodes(c);
  const auto model = mvga::fit(nodes, mvga::make_basis(1, 10), fun_rows(nodes, DerivOrder::kValue), DerivOrder::kValue);
  REQUIRE(model.t == 11);
  Matrix<cd> want = Matrix<cd>::Identity(11, 11);
  want(0, 0) = std::sqrt(double(m));
  CHECK((model.rtilde - want).cwiseAbs().maxCoeff() <= 1e-13);
  CHECK(mvga::gram_check(model) <= 1e-13);
}

TEST_CASE("two nodes cannot carry a cubic") {
  const auto nodes = line(2);
  const auto model = mvga::fit(nodes, mvga::make_basis(1, 3), fun_rows(nodes, DerivOrder::kValue), DerivOrder::kValue);
  CHECK(model.t == 2);
  REQUIRE(model.breakdown_column.has_value());
  CHECK(*model.breakdown_column == 3);
  CHECK(model.rtilde.rows() == 2);
  CHECK(model.q->cols() == 2);
  CHECK(mvga::gram_check(model) <= 1e-14);
}

TEST_CASE("derivative rows raise the rank bound") {
  // Two nodes with values and first derivatives: cubic Hermite, t = g = 4.
  const auto nodes = line(2);
  const auto map = mvga::identity_map<double>(mvga::layout_of(nodes, DerivOrder::kGradient));
  const auto model = mvga::fit(nodes, mvga::make_basis(1, 3), map, DerivOrder::kGradient);
  CHECK(model.t == 4);
  CHECK_FALSE(model.breakdown_column.has_value());
}

TEST_CASE("univariate Hessenberg identity") {
  const auto nodes = line(40);
  const auto model = mvga::fit(nodes, mvga::make_basis(1, 25), fun_rows(nodes, DerivOrder::kValue), DerivOrder::kValue);
  REQUIRE(model.t == 26);
  const Matrix<double>& q = *model.q;
  const Matrix<double> xq = nodes.coordinate(1).asDiagonal() * q.leftCols(25);
  // column i of rtilde (i >= 2) holds the coefficients of x q_{i-1}
  const Matrix<double> h = model.rtilde.rightCols(25);
  CHECK((xq - q * h).cwiseAbs().maxCoeff() <= 1e-12);
  // upper Hessenberg of the shift: rtilde is upper triangular
  CHECK(model.rtilde.triangularView<Eigen::StrictlyLower>().toDenseMatrix().cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("columns span the monomials up to each index") {
  std::mt19937_64 rng(9);
  const auto nodes = oracle::random_nodes(rng, 30, 2);
  const auto basis = mvga::make_basis(2, 4);
  const auto model = mvga::fit(nodes, basis, mvga::identity_map<double>(mvga::layout_of(nodes, DerivOrder::kHessian)),
                               DerivOrder::kHessian);
  const Matrix<double> v = oracle::monomial_matrix(nodes, basis, DerivOrder::kHessian);
  const Matrix<double>& q = *model.q;
  for (Eigen::Index i = 1; i <= v.cols(); ++i) {
    // residual of v_i against span(q_1..q_i)
    const Matrix<double> qi = q.leftCols(i);
    const Vector<double> res = v.col(i - 1) - qi * (qi.transpose() * v.col(i - 1));
    CHECK(res.norm() <= 1e-12 * v.col(i - 1).norm());
  }
}

TEST_CASE("two passes beat one on an ill-conditioned fit") {
  const auto nodes = line(200, 0.0, 1.0);
  const auto map = fun_rows(nodes, DerivOrder::kValue);
  mvga::FitOptions one;
  one.passes = 1;
  const auto m1 = mvga::fit(nodes, mvga::make_basis(1, 60), map, DerivOrder::kValue, one);
  const auto m2 = mvga::fit(nodes, mvga::make_basis(1, 60), map, DerivOrder::kValue);
  CHECK(mvga::gram_check(m2) <= 1e-13);
  CHECK(mvga::gram_check(m1) >= mvga::gram_check(m2));
}

TEST_CASE("fits are deterministic") {
  std::mt19937_64 rng(4);
  const auto nodes = oracle::random_nodes(rng, 80, 2);
  const auto map = mvga::identity_map<double>(mvga::layout_of(nodes, DerivOrder::kGradient));
  const auto a = mvga::fit(nodes, mvga::make_basis(2, 8), map, DerivOrder::kGradient);
  const auto b = mvga::fit(nodes, mvga::make_basis(2, 8), map, DerivOrder::kGradient);
  CHECK((a.rtilde.array() == b.rtilde.array()).all());
  CHECK((a.q->array() == b.q->array()).all());
}

TEST_CASE("function-only G ignores the derivative order") {
  std::mt19937_64 rng(8);
  const auto nodes = oracle::random_nodes(rng, 60, 2);
  const auto m0 = mvga::fit(nodes, mvga::make_basis(2, 7), fun_rows(nodes, DerivOrder::kValue), DerivOrder::kValue);
  const auto m2 = mvga::fit(nodes, mvga::make_basis(2, 7), fun_rows(nodes, DerivOrder::kHessian), DerivOrder::kHessian);
  REQUIRE(m0.t == m2.t);
  CHECK((m0.rtilde - m2.rtilde).cwiseAbs().maxCoeff() <= 1e-13 * m0.rtilde.cwiseAbs().maxCoeff());
  CHECK((m0.q->topRows(60) - m2.q->topRows(60)).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("error conditions") {
  const auto nodes = line(5);
  const auto basis = mvga::make_basis(1, 2);
  // zero G-norm of the constant column
  const auto deriv_only = mvga::selection_map<double>(mvga::layout_of(nodes, DerivOrder::kGradient), BlockId::partial(1));
  CHECK_THROWS_AS(mvga::fit(nodes, basis, deriv_only, DerivOrder::kGradient), mvga::DegenerateMap);
  // layout mismatch
  CHECK_THROWS_AS(mvga::fit(nodes, basis, fun_rows(nodes, DerivOrder::kValue), DerivOrder::kGradient),
                  mvga::LayoutMismatch);
  // dimension mismatch
  CHECK_THROWS_AS(mvga::fit(nodes, mvga::make_basis(2, 2), fun_rows(nodes, DerivOrder::kValue), DerivOrder::kValue),
                  mvga::InvalidArgument);
  // overflowing weights
  std::vector<mvga::CollocationRow<double>> rows;
  for (std::size_t j = 1; j <= 5; ++j) rows.push_back({{{BlockId::value(), j, 1e300}}});
  const mvga::CollocationMap<double> huge(mvga::layout_of(nodes, DerivOrder::kValue), rows);
  CHECK_THROWS_AS(mvga::fit(nodes, basis, huge, DerivOrder::kValue), mvga::NumericError);
}

TEST_CASE("discarding Q keeps R") {
  const auto nodes = line(10);
  mvga::FitOptions opt;
  opt.retain_q = false;
  const auto model = mvga::fit(nodes, mvga::make_basis(1, 4), fun_rows(nodes, DerivOrder::kValue), DerivOrder::kValue, opt);
  CHECK_FALSE(model.q.has_value());
  CHECK(model.rtilde.rows() == 5);
  CHECK_THROWS(mvga::gram_check(model));
}
