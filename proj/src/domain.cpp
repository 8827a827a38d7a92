#include "mvga/domain.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

namespace mvga {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kArcTable = 20000;

double hypot2(double x, double y) { return std::sqrt(x * x + y * y); }

double segment_distance(const Point2& p, const Point2& a, const Point2& b) {
  const double dx = b[0] - a[0], dy = b[1] - a[1];
  const double len2 = dx * dx + dy * dy;
  double s = len2 > 0 ? ((p[0] - a[0]) * dx + (p[1] - a[1]) * dy) / len2 : 0.0;
  s = std::clamp(s, 0.0, 1.0);
  return hypot2(p[0] - a[0] - s * dx, p[1] - a[1] - s * dy);
}

double polygon_signed_area(const std::vector<Point2>& v) {
  double area = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const auto& p = v[i];
    const auto& q = v[(i + 1) % v.size()];
    area += p[0] * q[1] - q[0] * p[1];
  }
  return 0.5 * area;
}

bool polygon_contains(const std::vector<Point2>& v, const Point2& p) {
  bool inside = false;
  for (std::size_t i = 0, j = v.size() - 1; i < v.size(); j = i++) {
    if ((v[i][1] > p[1]) != (v[j][1] > p[1]) &&
        p[0] < (v[j][0] - v[i][0]) * (p[1] - v[i][1]) / (v[j][1] - v[i][1]) + v[i][0]) {
      inside = !inside;
    }
  }
  return inside;
}

double ellipse_speed(const BoundaryCurve& c, double t) { return hypot2(c.a * std::sin(t), c.b * std::cos(t)); }

// Cumulative arclength at t_k = 2 pi k / kArcTable (composite Simpson per cell).
std::vector<double> ellipse_arc_table(const BoundaryCurve& c) {
  std::vector<double> s(kArcTable + 1, 0.0);
  const double h = 2.0 * kPi / kArcTable;
  for (int k = 0; k < kArcTable; ++k) {
    const double t0 = k * h;
    s[k + 1] = s[k] + h / 6.0 * (ellipse_speed(c, t0) + 4.0 * ellipse_speed(c, t0 + 0.5 * h) +
                                 ellipse_speed(c, t0 + h));
  }
  return s;
}

struct CurveSample {
  std::vector<Point2> points;
  std::vector<Point2> normals;
};

CurveSample sample_curve(const BoundaryCurve& c, std::size_t n) {
  CurveSample out;
  if (c.kind == BoundaryCurve::Kind::kEllipse) {
    const auto table = ellipse_arc_table(c);
    const double total = table.back();
    const double h = 2.0 * kPi / kArcTable;
    for (std::size_t i = 0; i < n; ++i) {
      const double target = total * static_cast<double>(i) / static_cast<double>(n);
      const auto it = std::upper_bound(table.begin(), table.end(), target);
      const auto k = static_cast<std::size_t>(std::max<std::ptrdiff_t>(0, it - table.begin() - 1));
      const double frac = k + 1 < table.size() && table[k + 1] > table[k]
                              ? (target - table[k]) / (table[k + 1] - table[k])
                              : 0.0;
      const double t = (static_cast<double>(k) + frac) * h;
      const double ct = std::cos(t), st = std::sin(t);
      out.points.push_back({c.center[0] + c.a * ct, c.center[1] + c.b * st});
      double nx = ct / c.a, ny = st / c.b;
      const double len = hypot2(nx, ny);
      nx /= len;
      ny /= len;
      if (c.hole) nx = -nx, ny = -ny;
      out.normals.push_back({nx, ny});
    }
    return out;
  }
  const auto& v = c.vertices;
  std::vector<double> cum(v.size() + 1, 0.0);
  for (std::size_t i = 0; i < v.size(); ++i) {
    const auto& a = v[i];
    const auto& b = v[(i + 1) % v.size()];
    cum[i + 1] = cum[i] + hypot2(b[0] - a[0], b[1] - a[1]);
  }
  const double total = cum.back();
  for (std::size_t i = 0; i < n; ++i) {
    const double s = total * (static_cast<double>(i) + 0.5) / static_cast<double>(n);
    std::size_t e = 0;
    while (e + 1 < v.size() && cum[e + 1] <= s) ++e;
    const auto& a = v[e];
    const auto& b = v[(e + 1) % v.size()];
    const double len = cum[e + 1] - cum[e];
    const double frac = (s - cum[e]) / len;
    out.points.push_back({a[0] + frac * (b[0] - a[0]), a[1] + frac * (b[1] - a[1])});
    double nx = (b[1] - a[1]) / len, ny = -(b[0] - a[0]) / len;
    if (c.hole) nx = -nx, ny = -ny;
    out.normals.push_back({nx, ny});
  }
  return out;
}

std::vector<Point2> lattice_points(const Domain& domain, double h) {
  const auto box = domain.bounding_box();
  const double cx = 0.5 * (box[0] + box[1]);
  const double cy = 0.5 * (box[2] + box[3]);
  const double dy = h * std::sqrt(3.0) / 2.0;
  const int ky = static_cast<int>(std::ceil(0.5 * (box[3] - box[2]) / dy)) + 1;
  const int kx = static_cast<int>(std::ceil(0.5 * (box[1] - box[0]) / h)) + 1;
  std::vector<Point2> pts;
  for (int k = -ky; k <= ky; ++k) {
    const double shift = (std::abs(k) % 2 == 1) ? 0.5 * h : 0.0;
    for (int i = -kx; i <= kx; ++i) {
      const Point2 p{cx + i * h + shift, cy + k * dy};
      if (domain.contains(p) && domain.boundary_distance(p) >= 0.5 * h) pts.push_back(p);
    }
  }
  return pts;
}

NodeSet<double> to_nodes(const std::vector<Point2>& pts) {
  Matrix<double> m(static_cast<Eigen::Index>(pts.size()), 2);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    m(static_cast<Eigen::Index>(i), 0) = pts[i][0];
    m(static_cast<Eigen::Index>(i), 1) = pts[i][1];
  }
  return NodeSet<double>(std::move(m));
}

}  // namespace

double BoundaryCurve::length() const {
  if (kind == Kind::kEllipse) return ellipse_arc_table(*this).back();
  double total = 0.0;
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    const auto& p = vertices[i];
    const auto& q = vertices[(i + 1) % vertices.size()];
    total += hypot2(q[0] - p[0], q[1] - p[1]);
  }
  return total;
}

double BoundaryCurve::implicit_residual(const Point2& p) const {
  if (kind == Kind::kEllipse) {
    const double x = (p[0] - center[0]) / a, y = (p[1] - center[1]) / b;
    return x * x + y * y - 1.0;
  }
  return distance(p);
}

double BoundaryCurve::distance(const Point2& p) const {
  if (kind == Kind::kEllipse) {
    const double x = p[0] - center[0], y = p[1] - center[1];
    if (a == b) return std::abs(hypot2(x, y) - a);
    // First-order estimate |F| / |grad F|.
    const double f = x * x / (a * a) + y * y / (b * b) - 1.0;
    const double gx = 2.0 * x / (a * a), gy = 2.0 * y / (b * b);
    const double gn = hypot2(gx, gy);
    return gn > 0 ? std::abs(f) / gn : std::min(a, b);
  }
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    best = std::min(best, segment_distance(p, vertices[i], vertices[(i + 1) % vertices.size()]));
  }
  return best;
}

Domain Domain::disk(double radius) {
  if (!(radius > 0)) throw InvalidArgument("disk: radius must be positive");
  Domain d;
  d.curves_.push_back({BoundaryCurve::Kind::kEllipse, {0.0, 0.0}, radius, radius, false, {}});
  return d;
}

Domain Domain::ellipse_minus_disk(double a, double b, double r) {
  if (!(a > 0 && b > 0 && r > 0) || r >= std::min(a, b)) {
    throw InvalidArgument("ellipse_minus_disk: empty domain");
  }
  Domain d;
  d.curves_.push_back({BoundaryCurve::Kind::kEllipse, {0.0, 0.0}, a, b, false, {}});
  d.curves_.push_back({BoundaryCurve::Kind::kEllipse, {0.0, 0.0}, r, r, true, {}});
  return d;
}

Domain Domain::polygon(std::vector<Point2> vertices) {
  if (vertices.size() < 3) throw InvalidArgument("polygon: need at least three vertices");
  const double area = polygon_signed_area(vertices);
  if (!(std::abs(area) > 0)) throw InvalidArgument("polygon: empty domain");
  if (area < 0) std::reverse(vertices.begin(), vertices.end());
  Domain d;
  BoundaryCurve c;
  c.kind = BoundaryCurve::Kind::kPolygon;
  c.vertices = std::move(vertices);
  d.curves_.push_back(std::move(c));
  return d;
}

bool Domain::contains(const Point2& p) const {
  for (const auto& c : curves_) {
    bool inside;
    if (c.kind == BoundaryCurve::Kind::kEllipse) {
      inside = c.implicit_residual(p) < 0.0;
    } else {
      inside = polygon_contains(c.vertices, p);
    }
    if (inside == c.hole) return false;
    if (!(c.distance(p) > 0.0)) return false;
  }
  return true;
}

double Domain::boundary_distance(const Point2& p) const {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& c : curves_) best = std::min(best, c.distance(p));
  return best;
}

double Domain::area() const {
  double total = 0.0;
  for (const auto& c : curves_) {
    const double a = c.kind == BoundaryCurve::Kind::kEllipse ? kPi * c.a * c.b
                                                              : std::abs(polygon_signed_area(c.vertices));
    total += c.hole ? -a : a;
  }
  return total;
}

std::array<double, 4> Domain::bounding_box() const {
  const auto& c = curves_.front();
  if (c.kind == BoundaryCurve::Kind::kEllipse) {
    return {c.center[0] - c.a, c.center[0] + c.a, c.center[1] - c.b, c.center[1] + c.b};
  }
  std::array<double, 4> box{c.vertices[0][0], c.vertices[0][0], c.vertices[0][1], c.vertices[0][1]};
  for (const auto& v : c.vertices) {
    box[0] = std::min(box[0], v[0]);
    box[1] = std::max(box[1], v[0]);
    box[2] = std::min(box[2], v[1]);
    box[3] = std::max(box[3], v[1]);
  }
  return box;
}

NodeSet<double> interior_nodes(const Domain& domain, std::size_t target) {
  if (target == 0) throw InvalidArgument("interior_nodes: target must be positive");
  const double area = domain.area();
  if (!(area > 0)) throw InvalidArgument("interior_nodes: empty domain");
  double h = 1.3 * std::sqrt(2.0 * area / (std::sqrt(3.0) * static_cast<double>(target)));
  std::vector<Point2> pts;
  for (int iter = 0;; ++iter) {
    if (iter > 3000) throw InvalidArgument("interior_nodes: target count is infeasible for this domain");
    pts = lattice_points(domain, h);
    if (pts.size() >= target) break;
    h *= 0.995;
  }
  // Drop the surplus closest to the boundary.
  std::vector<std::size_t> order(pts.size());
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> dist(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) dist[i] = domain.boundary_distance(pts[i]);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return dist[a] < dist[b]; });
  std::vector<bool> keep(pts.size(), true);
  for (std::size_t i = 0; i < pts.size() - target; ++i) keep[order[i]] = false;
  std::vector<Point2> kept;
  kept.reserve(target);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (keep[i]) kept.push_back(pts[i]);
  }
  return to_nodes(kept);
}

DomainNodes domain_nodes(const Domain& domain, std::size_t target_interior, std::size_t target_boundary) {
  const auto& curves = domain.curves();
  if (target_boundary < curves.size()) {
    throw InvalidArgument("domain_nodes: need at least one boundary node per curve");
  }
  std::vector<double> lengths;
  double total = 0.0;
  for (const auto& c : curves) {
    lengths.push_back(c.length());
    total += lengths.back();
  }
  // Largest-remainder split, at least one node per curve.
  std::vector<std::size_t> counts(curves.size(), 1);
  const std::size_t free = target_boundary - curves.size();
  std::vector<std::pair<double, std::size_t>> remainders;
  std::size_t assigned = 0;
  for (std::size_t i = 0; i < curves.size(); ++i) {
    const double share = static_cast<double>(free) * lengths[i] / total;
    const auto whole = static_cast<std::size_t>(std::floor(share));
    counts[i] += whole;
    assigned += whole;
    remainders.emplace_back(share - static_cast<double>(whole), i);
  }
  std::stable_sort(remainders.begin(), remainders.end(), [](auto& x, auto& y) { return x.first > y.first; });
  for (std::size_t k = 0; assigned < free; ++k, ++assigned) ++counts[remainders[k].second];
  return domain_nodes(domain, target_interior, counts);
}

DomainNodes domain_nodes(const Domain& domain, std::size_t target_interior,
                         const std::vector<std::size_t>& per_curve) {
  if (per_curve.size() != domain.curves().size()) {
    throw InvalidArgument("domain_nodes: one boundary count per curve required");
  }
  DomainNodes out;
  out.interior = interior_nodes(domain, target_interior);
  std::vector<Point2> pts, normals;
  for (std::size_t c = 0; c < per_curve.size(); ++c) {
    if (per_curve[c] == 0) throw InvalidArgument("domain_nodes: boundary counts must be positive");
    auto s = sample_curve(domain.curves()[c], per_curve[c]);
    pts.insert(pts.end(), s.points.begin(), s.points.end());
    normals.insert(normals.end(), s.normals.begin(), s.normals.end());
    out.curve.insert(out.curve.end(), per_curve[c], static_cast<int>(c));
  }
  out.boundary = to_nodes(pts);
  out.normals = to_nodes(normals).coords();
  return out;
}

NodeSet<double> padua_nodes(int n) {
  if (n < 1) throw InvalidArgument("padua_nodes: degree must be >= 1");
  std::vector<Point2> pts;
  for (int j = 0; j <= n; ++j) {
    for (int k = 0; k <= n + 1; ++k) {
      if ((j + k) % 2 != 0) continue;
      pts.push_back({std::cos(j * kPi / n), std::cos(k * kPi / (n + 1))});
    }
  }
  return to_nodes(pts);
}

NodeSet<double> tensor_grid(std::size_t k, double lo, double hi) {
  if (k < 2) throw InvalidArgument("tensor_grid: need at least 2 points per axis");
  std::vector<Point2> pts;
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      pts.push_back({lo + (hi - lo) * static_cast<double>(j) / static_cast<double>(k - 1),
                     lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(k - 1)});
    }
  }
  return to_nodes(pts);
}

NodeSet<double> subset(const NodeSet<double>& nodes, const std::vector<std::size_t>& rows) {
  Matrix<double> m(static_cast<Eigen::Index>(rows.size()), nodes.dim());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    m.row(static_cast<Eigen::Index>(i)) = nodes.node(rows[i]);
  }
  return NodeSet<double>(std::move(m));
}

}  // namespace mvga
