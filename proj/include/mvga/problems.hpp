#pragma once

#include <functional>
#include <string>
#include <vector>

#include "mvga/stacked.hpp"

namespace mvga {

/// Value, gradient and Hessian of a bivariate function at one point.
struct Jet2 {
  double f = 0, f1 = 0, f2 = 0, f11 = 0, f12 = 0, f22 = 0;
  double laplacian() const { return f11 + f22; }
};

using Field2 = std::function<Jet2(double x1, double x2)>;

/// Named bivariate test functions: "sin_x1x2", "gauss_quadratic"
/// (exp(-3(x1^2+x1x2+x2^2))), "exp_linear" (exp(x1+x2/2)), "one", "zero".
const Field2& test_function(const std::string& name);
std::vector<std::string> test_function_names();

/// Coefficient fields for u + alpha Lap u: a constant, or "neg_gauss"
/// (-exp(-|x|^2)).
using Coefficient2 = std::function<double(double x1, double x2)>;
Coefficient2 coefficient_field(const std::string& name);
Coefficient2 constant_coefficient(double value);

/// Samples a field at every node into a StackedVector of the given order.
StackedVector<double> sample(const Field2& field, const NodeSet<double>& nodes, DerivOrder order);
Vector<double> sample(const Coefficient2& field, const NodeSet<double>& nodes);

}  // namespace mvga
