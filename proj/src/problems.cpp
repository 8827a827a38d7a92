#include "mvga/problems.hpp"

#include <cmath>
#include <map>

namespace mvga {
namespace {

Jet2 sin_x1x2(double x, double y) {
  const double s = std::sin(x * y), c = std::cos(x * y);
  return {s, y * c, x * c, -y * y * s, c - x * y * s, -x * x * s};
}

Jet2 gauss_quadratic(double x, double y) {
  const double f = std::exp(-3.0 * (x * x + x * y + y * y));
  const double qx = 2.0 * x + y, qy = x + 2.0 * y;
  return {f, -3.0 * qx * f, -3.0 * qy * f, (9.0 * qx * qx - 6.0) * f, (9.0 * qx * qy - 3.0) * f,
          (9.0 * qy * qy - 6.0) * f};
}

Jet2 exp_linear(double x, double y) {
  const double f = std::exp(x + 0.5 * y);
  return {f, f, 0.5 * f, f, 0.5 * f, 0.25 * f};
}

const std::map<std::string, Field2>& registry() {
  static const std::map<std::string, Field2> fields = {
      {"sin_x1x2", sin_x1x2},
      {"gauss_quadratic", gauss_quadratic},
      {"exp_linear", exp_linear},
      {"one", [](double, double) { return Jet2{1, 0, 0, 0, 0, 0}; }},
      {"zero", [](double, double) { return Jet2{}; }},
  };
  return fields;
}

}  // namespace

const Field2& test_function(const std::string& name) {
  const auto& r = registry();
  const auto it = r.find(name);
  if (it == r.end()) throw InvalidArgument("unknown test function '" + name + "'");
  return it->second;
}

std::vector<std::string> test_function_names() {
  std::vector<std::string> names;
  for (const auto& [k, v] : registry()) names.push_back(k);
  return names;
}

Coefficient2 constant_coefficient(double value) {
  return [value](double, double) { return value; };
}

Coefficient2 coefficient_field(const std::string& name) {
  if (name == "neg_gauss") return [](double x, double y) { return -std::exp(-(x * x + y * y)); };
  throw InvalidArgument("unknown coefficient field '" + name + "'");
}

StackedVector<double> sample(const Field2& field, const NodeSet<double>& nodes, DerivOrder order) {
  if (nodes.dim() != 2) throw InvalidArgument("sample: test functions are bivariate");
  StackedVector<double> out(layout_of(nodes, order));
  for (std::size_t j = 0; j < nodes.size(); ++j) {
    const auto i = static_cast<Eigen::Index>(j);
    const Jet2 v = field(nodes.coords()(i, 0), nodes.coords()(i, 1));
    out.block(BlockId::value())(i) = v.f;
    if (order == DerivOrder::kValue) continue;
    out.block(BlockId::partial(1))(i) = v.f1;
    out.block(BlockId::partial(2))(i) = v.f2;
    if (order == DerivOrder::kGradient) continue;
    out.block(BlockId::partial(1, 1))(i) = v.f11;
    out.block(BlockId::partial(1, 2))(i) = v.f12;
    out.block(BlockId::partial(2, 2))(i) = v.f22;
  }
  return out;
}

Vector<double> sample(const Coefficient2& field, const NodeSet<double>& nodes) {
  if (nodes.dim() != 2) throw InvalidArgument("sample: coefficient fields are bivariate");
  Vector<double> out(static_cast<Eigen::Index>(nodes.size()));
  for (Eigen::Index i = 0; i < out.size(); ++i) out(i) = field(nodes.coords()(i, 0), nodes.coords()(i, 1));
  return out;
}

}  // namespace mvga
