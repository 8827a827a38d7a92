#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "mvga/stacked.hpp"

namespace mvga {

using Point2 = std::array<double, 2>;

/// Closed boundary curve of a planar domain. Normals point out of the domain,
/// so a hole's normals point toward the hole's center.
struct BoundaryCurve {
  enum class Kind { kEllipse, kPolygon };
  Kind kind = Kind::kEllipse;
  // Ellipse: center + semi-axes. A circle has equal axes.
  Point2 center{0.0, 0.0};
  double a = 1.0;
  double b = 1.0;
  bool hole = false;
  // Polygon: counter-clockwise vertices.
  std::vector<Point2> vertices;

  double length() const;
  /// Residual of the implicit equation (0 on the curve).
  double implicit_residual(const Point2& p) const;
  /// Approximate unsigned distance from p to the curve.
  double distance(const Point2& p) const;
};

/// Planar region: inside the first curve, outside every hole.
class Domain {
 public:
  static Domain disk(double radius = 1.0);
  /// {x1^2/a^2 + x2^2/b^2 <= 1} minus the disk of radius r at the origin.
  static Domain ellipse_minus_disk(double a = 1.0, double b = 2.0, double r = 0.5);
  static Domain polygon(std::vector<Point2> vertices);

  const std::vector<BoundaryCurve>& curves() const { return curves_; }
  /// Strictly inside (distance to every curve > 0 and on the correct side).
  bool contains(const Point2& p) const;
  double boundary_distance(const Point2& p) const;
  double area() const;
  std::array<double, 4> bounding_box() const;  ///< {xmin, xmax, ymin, ymax}

 private:
  std::vector<BoundaryCurve> curves_;
};

struct DomainNodes {
  NodeSet<double> interior;
  NodeSet<double> boundary;
  Matrix<double> normals;    ///< boundary.size() x 2, outward unit vectors
  std::vector<int> curve;    ///< curve index (0-based) of each boundary node
};

/// Quasi-uniform interior points (clipped hexagonal lattice, exactly
/// `target_interior` of them) and equi-arclength boundary points distributed
/// over the curves in proportion to their length.
DomainNodes domain_nodes(const Domain& domain, std::size_t target_interior, std::size_t target_boundary);
/// Same, with an explicit boundary count per curve.
DomainNodes domain_nodes(const Domain& domain, std::size_t target_interior,
                         const std::vector<std::size_t>& per_curve);

/// Exactly `target` lattice points strictly inside the domain.
NodeSet<double> interior_nodes(const Domain& domain, std::size_t target);

/// Padua points of degree n (first family): (cos(j pi/n), cos(k pi/(n+1)))
/// for 0 <= j <= n, 0 <= k <= n+1 with j+k even; (n+1)(n+2)/2 points.
NodeSet<double> padua_nodes(int n);

/// Uniform k x k tensor grid on [lo, hi]^2.
NodeSet<double> tensor_grid(std::size_t k, double lo = -1.0, double hi = 1.0);

/// Selects a subset of rows of `nodes`.
NodeSet<double> subset(const NodeSet<double>& nodes, const std::vector<std::size_t>& rows);

}  // namespace mvga
