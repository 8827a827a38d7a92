#pragma once

#include <json.hpp>

#include <string>
#include <vector>

#include "mvga/arnoldi.hpp"
#include "mvga/basis.hpp"
#include "mvga/collocation.hpp"
#include "mvga/eval.hpp"

namespace mvga::io {

using nlohmann::json;

enum class NumberFormat { kDecimal, kHex };

/// Shortest round-trip decimal, or C99 hex-float ("0x1.8p+1").
std::string format_number(double v, NumberFormat fmt = NumberFormat::kDecimal);
/// Accepts a JSON number or a string holding a decimal / hex-float literal.
double parse_number(const json& j);

json basis_to_json(const GrevlexBasis& basis);

json map_to_json(const CollocationMap<double>& map, NumberFormat fmt = NumberFormat::kDecimal);
CollocationMap<double> map_from_json(const json& j);

/// Model file. Q is never written.
json model_to_json(const FitModel<double>& model, NumberFormat fmt = NumberFormat::kDecimal);
/// `base_dir` resolves a relative "nodes_path" reference.
FitModel<double> model_from_json(const json& j, const std::string& base_dir = ".");

json read_json_file(const std::string& path);
/// Write via a temporary file and rename.
void write_file_atomic(const std::string& path, const std::string& content);

/// Numeric CSV. A first line that does not parse as numbers is taken as a
/// header. Empty cells and "nan" read as NaN.
struct CsvTable {
  std::vector<std::string> header;
  Matrix<double> data;
};
CsvTable read_csv(const std::string& path);

/// x_1..x_d, p, d_1 p..d_d p, d_11 p..d_dd p (columns per order).
std::string eval_csv(const NodeSet<double>& nodes, const StackedOutput<double>& out,
                     NumberFormat fmt = NumberFormat::kDecimal);
std::string matrix_csv(const std::vector<std::string>& header, const Matrix<double>& data,
                       NumberFormat fmt = NumberFormat::kDecimal);

}  // namespace mvga::io
