#include "mvga/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace mvga::io {
namespace {

json number_json(double v, NumberFormat fmt) {
  if (fmt == NumberFormat::kHex || !std::isfinite(v)) return format_number(v, NumberFormat::kHex);
  return v;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> cells;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) cells.push_back(trim(cell));
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

bool parse_cell(const std::string& cell, double& out) {
  if (cell.empty() || cell == "nan" || cell == "NaN") {
    out = std::nan("");
    return true;
  }
  char* end = nullptr;
  out = std::strtod(cell.c_str(), &end);
  return end != cell.c_str() && *end == '\0';
}

std::vector<double> matrix_rows(const Matrix<double>& m, Eigen::Index r) {
  std::vector<double> row(static_cast<std::size_t>(m.cols()));
  for (Eigen::Index c = 0; c < m.cols(); ++c) row[static_cast<std::size_t>(c)] = m(r, c);
  return row;
}

}  // namespace

std::string format_number(double v, NumberFormat fmt) {
  char buf[64];
  const auto res = fmt == NumberFormat::kHex ? std::to_chars(buf, buf + sizeof buf, v, std::chars_format::hex)
                                             : std::to_chars(buf, buf + sizeof buf, v);
  std::string s(buf, res.ptr);
  if (fmt == NumberFormat::kHex && std::isfinite(v)) {
    s = (s.front() == '-') ? "-0x" + s.substr(1) : "0x" + s;
  }
  return s;
}

double parse_number(const json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    double v = 0.0;
    if (parse_cell(s, v)) return v;
  }
  throw InvalidArgument("expected a number, got " + j.dump());
}

json basis_to_json(const GrevlexBasis& basis) {
  json indices = json::array();
  for (const auto& a : basis.indices()) indices.push_back(a.exponents());
  return {{"d", basis.dim()},
          {"n", basis.degree()},
          {"g", basis.size()},
          {"indices", indices},
          {"parent_s", basis.parent_s_table()},
          {"parent_u", basis.parent_u_table()}};
}

json map_to_json(const CollocationMap<double>& map, NumberFormat fmt) {
  json rows = json::array();
  const int d = map.layout().d;
  for (const auto& row : map.row_list()) {
    json terms = json::array();
    for (const auto& t : row.terms) terms.push_back({block_name(d, t.block), t.node, number_json(t.weight, fmt)});
    rows.push_back(std::move(terms));
  }
  return {{"m", map.layout().m}, {"d", d}, {"order", to_int(map.layout().order)}, {"rows", rows}};
}

CollocationMap<double> map_from_json(const json& j) {
  const StackedLayout layout{j.at("m").get<std::size_t>(), j.at("d").get<int>(),
                             order_from_int(j.at("order").get<int>())};
  std::vector<CollocationRow<double>> rows;
  for (const auto& jr : j.at("rows")) {
    CollocationRow<double> row;
    for (const auto& jt : jr) {
      if (!jt.is_array() || jt.size() != 3) throw InvalidArgument("map: each term is [block, node, weight]");
      row.terms.push_back({parse_block_name(layout.d, jt[0].get<std::string>()), jt[1].get<std::size_t>(),
                           parse_number(jt[2])});
    }
    rows.push_back(std::move(row));
  }
  return {layout, std::move(rows)};
}

json model_to_json(const FitModel<double>& model, NumberFormat fmt) {
  json r = json::array();
  for (Eigen::Index i = 0; i < model.rtilde.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index k = 0; k < model.rtilde.cols(); ++k) row.push_back(number_json(model.rtilde(i, k), fmt));
    r.push_back(std::move(row));
  }
  json nodes = json::array();
  for (Eigen::Index i = 0; i < model.nodes.coords().rows(); ++i) {
    json row = json::array();
    for (double v : matrix_rows(model.nodes.coords(), i)) row.push_back(number_json(v, fmt));
    nodes.push_back(std::move(row));
  }
  json out = {{"format", "mvga-model"},
              {"version", 1},
              {"number_format", fmt == NumberFormat::kHex ? "hex" : "decimal"},
              {"d", model.dim()},
              {"n", model.basis.degree()},
              {"order", to_int(model.order)},
              {"g", model.g()},
              {"t", model.t},
              {"parent_s", model.basis.parent_s_table()},
              {"parent_u", model.basis.parent_u_table()},
              {"Rtilde", r},
              {"map", map_to_json(model.map, fmt)},
              {"nodes", nodes},
              {"breakdown_column", model.breakdown_column ? json(*model.breakdown_column) : json(nullptr)}};
  if (model.coeffs) {
    json c = json::array();
    for (Eigen::Index i = 0; i < model.coeffs->size(); ++i) c.push_back(number_json((*model.coeffs)(i), fmt));
    out["coeffs"] = std::move(c);
  }
  return out;
}

FitModel<double> model_from_json(const json& j, const std::string& base_dir) {
  if (j.value("format", "") != "mvga-model") throw InvalidArgument("not an mvga model file");
  FitModel<double> model;
  const int d = j.at("d").get<int>();
  const int n = j.at("n").get<int>();
  model.basis = make_basis(d, n);
  if (j.at("g").get<std::size_t>() != model.basis.size() ||
      j.at("parent_s").get<std::vector<std::size_t>>() != model.basis.parent_s_table() ||
      j.at("parent_u").get<std::vector<int>>() != model.basis.parent_u_table()) {
    throw InvalidArgument("model: parent table does not match the (d, n) basis");
  }
  model.order = order_from_int(j.at("order").get<int>());
  model.t = j.at("t").get<std::size_t>();
  if (model.t < 1 || model.t > model.basis.size()) throw InvalidArgument("model: t out of range");

  const auto& jr = j.at("Rtilde");
  const auto t = static_cast<Eigen::Index>(model.t);
  if (jr.size() != model.t) throw InvalidArgument("model: Rtilde must be t x t");
  model.rtilde.resize(t, t);
  for (Eigen::Index i = 0; i < t; ++i) {
    if (jr[static_cast<std::size_t>(i)].size() != model.t) throw InvalidArgument("model: Rtilde must be t x t");
    for (Eigen::Index k = 0; k < t; ++k) {
      model.rtilde(i, k) = parse_number(jr[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)]);
    }
  }

  Matrix<double> coords;
  if (j.contains("nodes")) {
    const auto& jn = j.at("nodes");
    coords.resize(static_cast<Eigen::Index>(jn.size()), d);
    for (std::size_t i = 0; i < jn.size(); ++i) {
      if (jn[i].size() != static_cast<std::size_t>(d)) throw InvalidArgument("model: node row has wrong length");
      for (int u = 0; u < d; ++u) coords(static_cast<Eigen::Index>(i), u) = parse_number(jn[i][static_cast<std::size_t>(u)]);
    }
  } else {
    std::filesystem::path p = j.at("nodes_path").get<std::string>();
    if (p.is_relative()) p = std::filesystem::path(base_dir) / p;
    coords = read_csv(p.string()).data.leftCols(d);
  }
  model.nodes = NodeSet<double>(std::move(coords));
  model.map = map_from_json(j.at("map"));
  if (!(model.map.layout() == model.layout())) throw InvalidArgument("model: map layout does not match nodes/order");
  if (j.contains("coeffs")) {
    const auto& jc = j.at("coeffs");
    if (jc.size() != model.t) throw InvalidArgument("model: coefficient count must equal t");
    Vector<double> c(t);
    for (Eigen::Index i = 0; i < t; ++i) c(i) = parse_number(jc[static_cast<std::size_t>(i)]);
    model.coeffs = std::move(c);
  }
  if (j.contains("breakdown_column") && !j.at("breakdown_column").is_null()) {
    model.breakdown_column = j.at("breakdown_column").get<std::size_t>();
  }
  return model;
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw InvalidArgument(path + ": " + e.what());
  }
}

void write_file_atomic(const std::string& path, const std::string& content) {
  const std::filesystem::path target(path);
  if (target.has_parent_path()) std::filesystem::create_directories(target.parent_path());
  const std::filesystem::path tmp = target.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + tmp.string());
    out << content;
    if (!out) throw Error("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, target);
}

CsvTable read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open " + path);
  CsvTable table;
  std::vector<std::vector<double>> rows;
  std::string line;
  bool first = true;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty() || trim(line)[0] == '#') continue;
    const auto cells = split(line);
    std::vector<double> row(cells.size());
    bool numeric = true;
    for (std::size_t c = 0; c < cells.size(); ++c) numeric = numeric && parse_cell(cells[c], row[c]);
    if (!numeric) {
      if (first) {
        table.header = cells;
        first = false;
        continue;
      }
      throw InvalidArgument(path + ":" + std::to_string(line_no) + ": non-numeric value");
    }
    first = false;
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw InvalidArgument(path + ":" + std::to_string(line_no) + ": inconsistent column count");
    }
    rows.push_back(std::move(row));
  }
  const std::size_t cols = rows.empty() ? table.header.size() : rows.front().size();
  table.data.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < cols; ++c) table.data(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
  }
  return table;
}

std::string matrix_csv(const std::vector<std::string>& header, const Matrix<double>& data, NumberFormat fmt) {
  std::string out;
  for (std::size_t c = 0; c < header.size(); ++c) out += (c ? "," : "") + header[c];
  if (!header.empty()) out += '\n';
  for (Eigen::Index r = 0; r < data.rows(); ++r) {
    for (Eigen::Index c = 0; c < data.cols(); ++c) {
      if (c) out += ',';
      out += format_number(data(r, c), fmt);
    }
    out += '\n';
  }
  return out;
}

std::string eval_csv(const NodeSet<double>& nodes, const StackedOutput<double>& out, NumberFormat fmt) {
  const auto& layout = out.layout();
  const int d = layout.d;
  std::vector<std::string> header;
  for (int u = 1; u <= d; ++u) header.push_back("x" + std::to_string(u));
  for (std::size_t b = 0; b < layout.blocks(); ++b) {
    const std::string name = block_name(d, block_at(d, b));
    header.push_back(name == "f" ? "p" : name);
  }
  Matrix<double> data(static_cast<Eigen::Index>(layout.m), d + static_cast<Eigen::Index>(layout.blocks()));
  data.leftCols(d) = nodes.coords();
  for (std::size_t b = 0; b < layout.blocks(); ++b) {
    data.col(d + static_cast<Eigen::Index>(b)) = out.values.block(block_at(d, b));
  }
  return matrix_csv(header, data, fmt);
}

}  // namespace mvga::io
