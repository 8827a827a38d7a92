#include "mvga/runner.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <map>
#include <random>

#include "mvga/domain.hpp"
#include "mvga/problems.hpp"

namespace mvga {
namespace {

using nlohmann::json;

std::string resolve(const std::string& base_dir, const std::string& path) {
  std::filesystem::path p(path);
  if (p.is_relative()) p = std::filesystem::path(base_dir) / p;
  return p.string();
}

Domain make_domain(const json& jd) {
  const std::string kind = jd.at("kind").get<std::string>();
  if (kind == "disk") return Domain::disk(jd.value("radius", 1.0));
  if (kind == "ellipse_minus_disk") {
    return Domain::ellipse_minus_disk(jd.value("a", 1.0), jd.value("b", 2.0), jd.value("r", 0.5));
  }
  if (kind == "polygon") {
    std::vector<Point2> v;
    for (const auto& p : jd.at("vertices")) v.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
    return Domain::polygon(std::move(v));
  }
  throw InvalidArgument("unknown domain kind '" + kind + "'");
}

Coefficient2 make_alpha(const json& spec) {
  if (!spec.contains("alpha")) return constant_coefficient(0.0);
  const auto& a = spec.at("alpha");
  if (a.is_number()) return constant_coefficient(a.get<double>());
  if (a.is_string()) {
    const std::string s = a.get<std::string>();
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end != s.c_str() && *end == '\0') return constant_coefficient(v);
    return coefficient_field(s);
  }
  throw InvalidArgument("alpha must be a number or a coefficient name");
}

// Fitting geometry split by role. Group 0 interior, 1 dirichlet / boundary,
// 2 neumann.
struct Geometry {
  NodeSet<double> interior, dirichlet, neumann;
  Matrix<double> neumann_normals;
  std::optional<Domain> domain;
};

// Sampled data per group when read from files; column 0 is the main value.
struct FileValues {
  Matrix<double> interior, dirichlet, neumann;
};

Matrix<double> take_rows(const Matrix<double>& m, const std::vector<std::size_t>& rows) {
  Matrix<double> out(static_cast<Eigen::Index>(rows.size()), m.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) out.row(static_cast<Eigen::Index>(i)) = m.row(static_cast<Eigen::Index>(rows[i]));
  return out;
}

NodeSet<double> nodes_or_empty(const Matrix<double>& m) {
  return m.rows() > 0 ? NodeSet<double>(m) : NodeSet<double>();
}

Geometry geometry_from_files(const json& spec, const std::string& base_dir, std::optional<FileValues>& values) {
  const io::CsvTable nodes = io::read_csv(resolve(base_dir, spec.at("nodes").get<std::string>()));
  std::vector<Eigen::Index> coord_cols, normal_cols;
  Eigen::Index group_col = -1;
  if (nodes.header.empty()) {
    for (Eigen::Index c = 0; c < nodes.data.cols(); ++c) coord_cols.push_back(c);
  } else {
    for (std::size_t c = 0; c < nodes.header.size(); ++c) {
      const std::string& h = nodes.header[c];
      if (h == "group") group_col = static_cast<Eigen::Index>(c);
      else if (!h.empty() && h[0] == 'x') coord_cols.push_back(static_cast<Eigen::Index>(c));
      else if (!h.empty() && h[0] == 'n') normal_cols.push_back(static_cast<Eigen::Index>(c));
    }
  }
  if (coord_cols.empty() || nodes.data.rows() == 0) throw InvalidArgument("nodes file has no coordinates");
  const auto d = static_cast<Eigen::Index>(coord_cols.size());
  Matrix<double> coords(nodes.data.rows(), d), normals(nodes.data.rows(), d);
  normals.setZero();
  for (Eigen::Index c = 0; c < d; ++c) coords.col(c) = nodes.data.col(coord_cols[static_cast<std::size_t>(c)]);
  if (!normal_cols.empty()) {
    if (static_cast<Eigen::Index>(normal_cols.size()) != d) throw InvalidArgument("nodes file: need d normal columns");
    for (Eigen::Index c = 0; c < d; ++c) normals.col(c) = nodes.data.col(normal_cols[static_cast<std::size_t>(c)]);
  }
  std::array<std::vector<std::size_t>, 3> groups;
  for (Eigen::Index r = 0; r < nodes.data.rows(); ++r) {
    const double gv = group_col >= 0 ? nodes.data(r, group_col) : 0.0;
    if (gv != 0.0 && gv != 1.0 && gv != 2.0) throw InvalidArgument("nodes file: group must be 0, 1 or 2");
    groups[static_cast<std::size_t>(gv)].push_back(static_cast<std::size_t>(r));
  }
  Geometry geo;
  geo.interior = nodes_or_empty(take_rows(coords, groups[0]));
  geo.dirichlet = nodes_or_empty(take_rows(coords, groups[1]));
  geo.neumann = nodes_or_empty(take_rows(coords, groups[2]));
  geo.neumann_normals = take_rows(normals, groups[2]);
  if (spec.contains("values")) {
    const io::CsvTable v = io::read_csv(resolve(base_dir, spec.at("values").get<std::string>()));
    if (v.data.rows() != nodes.data.rows()) throw InvalidArgument("values file must have one row per node");
    values = FileValues{take_rows(v.data, groups[0]), take_rows(v.data, groups[1]), take_rows(v.data, groups[2])};
  }
  return geo;
}

// Moves each interior node by up to `jitter` lattice spacings, keeping it
// inside the domain. Same seed, same nodes.
NodeSet<double> jittered(const Domain& domain, const NodeSet<double>& nodes, double jitter, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  const double h = std::sqrt(domain.area() / static_cast<double>(nodes.size()));
  Matrix<double> c = nodes.coords();
  for (Eigen::Index i = 0; i < c.rows(); ++i) {
    for (int attempt = 0; attempt < 8; ++attempt) {
      const Point2 p{c(i, 0) + jitter * h * unit(rng), c(i, 1) + jitter * h * unit(rng)};
      if (domain.contains(p) && domain.boundary_distance(p) > 0.25 * h) {
        c(i, 0) = p[0];
        c(i, 1) = p[1];
        break;
      }
    }
  }
  return NodeSet<double>(std::move(c));
}

Geometry geometry_from_domain(const json& spec) {
  const json& jd = spec.at("domain");
  Geometry geo;
  if (jd.at("kind").get<std::string>() == "padua") {
    geo.interior = padua_nodes(jd.value("padua_degree", spec.at("degree").get<int>()));
    return geo;
  }
  const Domain domain = make_domain(jd);
  const auto interior = jd.at("interior").get<std::size_t>();
  DomainNodes dn = jd.at("boundary").is_array()
                       ? domain_nodes(domain, interior, jd.at("boundary").get<std::vector<std::size_t>>())
                       : domain_nodes(domain, interior, jd.at("boundary").get<std::size_t>());
  geo.interior = dn.interior;
  const double jitter = jd.value("jitter", 0.0);
  if (jitter > 0.0) geo.interior = jittered(domain, geo.interior, jitter, spec.value("seed", 0u));
  std::vector<int> neumann_curves = spec.value("neumann_curves", std::vector<int>{});
  std::vector<std::size_t> dir_rows, neu_rows;
  for (std::size_t i = 0; i < dn.curve.size(); ++i) {
    const bool neumann = std::find(neumann_curves.begin(), neumann_curves.end(), dn.curve[i]) != neumann_curves.end();
    (neumann ? neu_rows : dir_rows).push_back(i);
  }
  geo.dirichlet = dir_rows.empty() ? NodeSet<double>() : subset(dn.boundary, dir_rows);
  geo.neumann = neu_rows.empty() ? NodeSet<double>() : subset(dn.boundary, neu_rows);
  geo.neumann_normals = take_rows(dn.normals, neu_rows);
  geo.domain = domain;
  return geo;
}

Vector<double> jet_column(const Field2& field, const NodeSet<double>& nodes, double Jet2::*member) {
  Vector<double> out(static_cast<Eigen::Index>(nodes.size()));
  for (Eigen::Index i = 0; i < out.size(); ++i) out(i) = (field(nodes.coords()(i, 0), nodes.coords()(i, 1)).*member);
  return out;
}

Vector<double> pde_rhs(const Field2& u, const Coefficient2& alpha, const NodeSet<double>& nodes) {
  Vector<double> out(static_cast<Eigen::Index>(nodes.size()));
  for (Eigen::Index i = 0; i < out.size(); ++i) {
    const double x = nodes.coords()(i, 0), y = nodes.coords()(i, 1);
    const Jet2 v = u(x, y);
    out(i) = v.f + alpha(x, y) * v.laplacian();
  }
  return out;
}

Vector<double> flux(const Field2& u, const NodeSet<double>& nodes, const Matrix<double>& normals) {
  Vector<double> out(static_cast<Eigen::Index>(nodes.size()));
  for (Eigen::Index i = 0; i < out.size(); ++i) {
    const Jet2 v = u(nodes.coords()(i, 0), nodes.coords()(i, 1));
    out(i) = normals(i, 0) * v.f1 + normals(i, 1) * v.f2;
  }
  return out;
}

Vector<double> col0(const Matrix<double>& m) { return m.rows() ? Vector<double>(m.col(0)) : Vector<double>(0); }

LsProblem build_problem(const json& spec, const Geometry& geo, const std::optional<FileValues>& files,
                        const std::optional<Field2>& exact, bool& has_data) {
  const std::string app = spec.at("app").get<std::string>();
  const std::optional<Field2> rhs_fn =
      spec.contains("rhs") ? std::optional<Field2>(test_function(spec.at("rhs").get<std::string>())) : std::nullopt;
  const std::optional<Field2> dir_fn = spec.contains("dirichlet")
                                           ? std::optional<Field2>(test_function(spec.at("dirichlet").get<std::string>()))
                                           : std::nullopt;
  has_data = files.has_value() || exact.has_value() || rhs_fn.has_value();
  auto zeros = [](const NodeSet<double>& n) { return Vector<double>::Zero(static_cast<Eigen::Index>(n.size())).eval(); };

  if (app == "interpolation") {
    const NodeSet<double> all = concat_nodes({&geo.interior, &geo.dirichlet, &geo.neumann});
    Vector<double> f = zeros(all);
    if (files) {
      f << col0(files->interior), col0(files->dirichlet), col0(files->neumann);
    } else if (exact) {
      f = jet_column(*exact, all, &Jet2::f);
    }
    return build_interpolation(all, f, order_from_int(spec.value("order", 2)));
  }
  if (app == "hermite") {
    const NodeSet<double> boundary = concat_nodes({&geo.dirichlet, &geo.neumann});
    const NodeSet<double> all = concat_nodes({&geo.interior, &boundary});
    const int d = all.dim();
    Vector<double> f = zeros(all);
    Matrix<double> grad = Matrix<double>::Zero(static_cast<Eigen::Index>(boundary.size()), d);
    if (files) {
      f << col0(files->interior), col0(files->dirichlet), col0(files->neumann);
      if (boundary.size() > 0) {
        if (files->dirichlet.cols() < d + 1) throw InvalidArgument("hermite values need f and d gradient columns");
        Matrix<double> b(static_cast<Eigen::Index>(boundary.size()), files->dirichlet.cols());
        b << files->dirichlet, files->neumann;
        grad = b.middleCols(1, d);
      }
    } else if (exact) {
      f = jet_column(*exact, all, &Jet2::f);
      if (boundary.size() > 0) {
        grad.col(0) = jet_column(*exact, boundary, &Jet2::f1);
        grad.col(1) = jet_column(*exact, boundary, &Jet2::f2);
      }
    }
    return build_hermite(geo.interior, boundary, f, grad);
  }
  if (app == "poisson_dirichlet" || app == "poisson_mixed") {
    const Coefficient2 alpha_fn = make_alpha(spec);
    Vector<double> alpha(static_cast<Eigen::Index>(geo.interior.size()));
    for (Eigen::Index i = 0; i < alpha.size(); ++i) alpha(i) = alpha_fn(geo.interior.coords()(i, 0), geo.interior.coords()(i, 1));
    Vector<double> f = zeros(geo.interior), h1 = zeros(geo.dirichlet), h2 = zeros(geo.neumann);
    if (files) {
      f = col0(files->interior);
      h1 = col0(files->dirichlet);
      h2 = col0(files->neumann);
    } else if (exact) {
      f = pde_rhs(*exact, alpha_fn, geo.interior);
      if (geo.dirichlet.size()) h1 = jet_column(*exact, geo.dirichlet, &Jet2::f);
      if (geo.neumann.size()) h2 = flux(*exact, geo.neumann, geo.neumann_normals);
    } else {
      if (rhs_fn) f = jet_column(*rhs_fn, geo.interior, &Jet2::f);
      if (dir_fn && geo.dirichlet.size()) h1 = jet_column(*dir_fn, geo.dirichlet, &Jet2::f);
    }
    if (app == "poisson_dirichlet") {
      if (geo.neumann.size() > 0) throw InvalidArgument("poisson_dirichlet: unexpected Neumann nodes");
      return build_poisson_dirichlet(geo.interior, geo.dirichlet, alpha, f, h1);
    }
    return build_poisson_mixed(geo.interior, geo.dirichlet, geo.neumann, geo.neumann_normals, alpha, f, h1, h2);
  }
  throw InvalidArgument("unknown app '" + app + "'");
}

NodeSet<double> make_eval_nodes(const json& spec, const std::string& base_dir, const ProblemRun& run,
                                const Geometry& geo) {
  const json je = spec.value("eval", json{{"kind", "fitting"}});
  const std::string kind = je.value("kind", "fitting");
  if (kind == "fitting") return run.problem.nodes;
  if (kind == "grid") return tensor_grid(je.value("size", std::size_t{41}), je.value("lo", -1.0), je.value("hi", 1.0));
  if (kind == "interior") {
    if (!geo.domain) throw InvalidArgument("eval kind 'interior' needs a domain");
    return interior_nodes(*geo.domain, je.at("count").get<std::size_t>());
  }
  if (kind == "file") {
    const io::CsvTable t = io::read_csv(resolve(base_dir, je.at("path").get<std::string>()));
    return NodeSet<double>(t.data.leftCols(run.problem.nodes.dim()));
  }
  throw InvalidArgument("unknown eval kind '" + kind + "'");
}

double max_abs(const Vector<double>& v) { return v.size() ? v.cwiseAbs().maxCoeff() : 0.0; }

}  // namespace

ProblemRun run_problem(const json& spec, const std::string& base_dir, const FitOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  ProblemRun run;
  run.spec = spec;
  const int degree = spec.at("degree").get<int>();
  if (degree < 0) throw InvalidArgument("degree must be >= 0");

  std::optional<FileValues> files;
  const Geometry geo = spec.contains("nodes") ? geometry_from_files(spec, base_dir, files) : geometry_from_domain(spec);
  const std::optional<Field2> exact =
      spec.contains("problem") ? std::optional<Field2>(test_function(spec.at("problem").get<std::string>()))
                               : std::nullopt;
  if (exact && geo.interior.dim() != 2) throw InvalidArgument("named problems are bivariate");
  bool has_data = false;
  run.problem = build_problem(spec, geo, files, exact, has_data);
  const bool solve = has_data && spec.value("compute_coeffs", true);

  FitOptions opts = options;
  opts.retain_q = true;
  run.model = fit(run.problem.nodes, make_basis(run.problem.nodes.dim(), degree), run.problem.map, run.problem.order,
                  opts);
  const double gram = gram_check(run.model);
  if (solve) {
    run.solve = solve_coefficients(run.model, run.problem);
    run.model.coeffs = run.solve->coeffs;
  }
  if (!options.retain_q) run.model.q.reset();

  json& m = run.metrics;
  m["app"] = spec.at("app");
  m["d"] = run.model.dim();
  m["n"] = degree;
  m["order"] = to_int(run.model.order);
  m["g"] = run.model.g();
  m["t"] = run.model.t;
  m["breakdown"] = run.model.breakdown_column.has_value();
  if (run.model.breakdown_column) m["breakdown_column"] = *run.model.breakdown_column;
  m["rows"] = run.problem.map.rows();
  m["m"] = run.problem.nodes.size();
  for (const auto& gr : run.problem.partition) m["groups"][gr.name] = gr.count;
  m["gram_deviation"] = gram;

  if (solve) {
    m["residual_inf"] = run.solve->residual_inf;
    m["residual_orthogonality"] = run.solve->residual_orthogonality;
    m["solve_path"] = to_string(run.solve->path);
    run.eval_nodes = make_eval_nodes(spec, base_dir, run, geo);
    run.eval = eval_poly(run.model, run.eval_nodes);
    m["eval_nodes"] = run.eval_nodes.size();
    m["extrapolating"] = run.eval->extrapolating;
    if (exact) {
      const auto& out = *run.eval;
      const bool with_hessian = out.layout().order == DerivOrder::kHessian;
      const bool with_grad = out.layout().order != DerivOrder::kValue;
      Vector<double> err(static_cast<Eigen::Index>(run.eval_nodes.size()));
      double div_err = 0.0, lap_err = 0.0;
      for (Eigen::Index i = 0; i < err.size(); ++i) {
        const Jet2 v = (*exact)(run.eval_nodes.coords()(i, 0), run.eval_nodes.coords()(i, 1));
        err(i) = std::abs(out.fun()(i) - v.f);
        if (with_grad) div_err = std::max(div_err, std::abs(out.grad(1)(i) + out.grad(2)(i) - (v.f1 + v.f2)));
        if (with_hessian) lap_err = std::max(lap_err, std::abs(out.hess(1, 1)(i) + out.hess(2, 2)(i) - v.laplacian()));
      }
      run.errors = err;
      m["max_error"] = max_abs(err);
      if (with_grad) m["div_error"] = div_err;
      if (with_hessian) m["laplace_error"] = lap_err;
    }
  }
  m["runtime_ms"] =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return run;
}

void write_outputs(const ProblemRun& run, const std::string& out_dir, io::NumberFormat fmt) {
  namespace fs = std::filesystem;
  const fs::path dir(out_dir);
  fs::create_directories(dir);
  io::write_file_atomic((dir / "model.json").string(), io::model_to_json(run.model, fmt).dump(1) + "\n");

  const auto& nodes = run.problem.nodes;
  const int d = nodes.dim();
  std::vector<std::string> header;
  for (int u = 1; u <= d; ++u) header.push_back("x" + std::to_string(u));
  header.push_back("group");
  Matrix<double> fit_nodes(static_cast<Eigen::Index>(nodes.size()), d + 1);
  fit_nodes.leftCols(d) = nodes.coords();
  for (std::size_t gi = 0; gi < run.problem.partition.size(); ++gi) {
    const auto& gr = run.problem.partition[gi];
    const std::string& name = gr.name;
    const double code = (name == "neumann") ? 2.0 : (name == "interior" || name == "all") ? 0.0 : 1.0;
    fit_nodes.col(d).segment(static_cast<Eigen::Index>(gr.first - 1), static_cast<Eigen::Index>(gr.count))
        .setConstant(code);
  }
  io::write_file_atomic((dir / "fit_nodes.csv").string(), io::matrix_csv(header, fit_nodes, fmt));

  if (run.eval) io::write_file_atomic((dir / "eval.csv").string(), io::eval_csv(run.eval_nodes, *run.eval, fmt));
  if (run.errors) {
    std::vector<std::string> eh(header.begin(), header.end() - 1);
    eh.push_back("abs_error");
    Matrix<double> data(static_cast<Eigen::Index>(run.eval_nodes.size()), d + 1);
    data.leftCols(d) = run.eval_nodes.coords();
    data.col(d) = *run.errors;
    io::write_file_atomic((dir / "errors.csv").string(), io::matrix_csv(eh, data, fmt));
  }
  io::write_file_atomic((dir / "metrics.json").string(), run.metrics.dump(2) + "\n");
}

std::vector<std::string> example_names() {
  return {"hermite_sin", "padua_laplace", "poisson_dirichlet", "poisson_variable", "poisson_mixed"};
}

json example_spec(const std::string& name) {
  if (name == "hermite_sin") {
    return {{"app", "hermite"},
            {"degree", 10},
            {"domain", {{"kind", "disk"}, {"interior", 120}, {"boundary", 42}}},
            {"problem", "sin_x1x2"},
            {"eval", {{"kind", "interior"}, {"count", 560}}}};
  }
  if (name == "padua_laplace") {
    return {{"app", "interpolation"},
            {"degree", 32},
            {"order", 2},
            {"domain", {{"kind", "padua"}}},
            {"problem", "gauss_quadratic"},
            {"eval", {{"kind", "grid"}, {"size", 41}}}};
  }
  const json annulus = {{"kind", "ellipse_minus_disk"}, {"a", 1.0}, {"b", 2.0}, {"r", 0.5}};
  if (name == "poisson_dirichlet") {
    json dom = annulus;
    dom["interior"] = 504;
    dom["boundary"] = 126;
    return {{"app", "poisson_dirichlet"}, {"degree", 22}, {"alpha", -0.1}, {"domain", dom},
            {"problem", "exp_linear"},    {"eval", {{"kind", "fitting"}}}};
  }
  if (name == "poisson_variable") {
    json dom = annulus;
    dom["interior"] = 3650;
    dom["boundary"] = 331;
    return {{"app", "poisson_dirichlet"}, {"degree", 40},       {"alpha", "neg_gauss"},
            {"domain", dom},              {"rhs", "one"},       {"dirichlet", "zero"},
            {"eval", {{"kind", "fitting"}}}};
  }
  if (name == "poisson_mixed") {
    json dom = annulus;
    dom["interior"] = 504;
    // Outer ellipse carries the Neumann data, the inner circle the Dirichlet data.
    dom["boundary"] = {96, 30};
    return {{"app", "poisson_mixed"}, {"degree", 22},         {"alpha", "neg_gauss"},
            {"domain", dom},          {"neumann_curves", {0}}, {"problem", "sin_x1x2"},
            {"eval", {{"kind", "fitting"}}}};
  }
  throw InvalidArgument("unknown example '" + name + "'");
}

}  // namespace mvga
