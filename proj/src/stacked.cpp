#include "mvga/stacked.hpp"

#include <cctype>
#include <string>

namespace mvga {

DerivOrder order_from_int(int order) {
  if (order < 0 || order > 2) throw InvalidArgument("derivative order must be 0, 1 or 2");
  return static_cast<DerivOrder>(order);
}

std::size_t stacked_dim(int d, DerivOrder order) {
  if (d < 1) throw InvalidArgument("stacked_dim: d must be >= 1");
  const auto dd = static_cast<std::size_t>(d);
  switch (order) {
    case DerivOrder::kValue: return 1;
    case DerivOrder::kGradient: return 1 + dd;
    case DerivOrder::kHessian: return 1 + dd + dd * (dd + 1) / 2;
  }
  throw InvalidArgument("stacked_dim: invalid order");
}

std::size_t block_index(int d, BlockId id) {
  const auto dd = static_cast<std::size_t>(d);
  if (id.first < 0 || id.second < 0 || id.first > d || id.second > d ||
      (id.first == 0 && id.second != 0) || (id.second != 0 && id.second < id.first)) {
    throw InvalidArgument("block_index: invalid block id");
  }
  if (id.first == 0) return 0;
  if (id.second == 0) return static_cast<std::size_t>(id.first);
  // Pairs (j,k), j<=k, in row-major order after the gradient blocks.
  const auto j = static_cast<std::size_t>(id.first);
  const auto k = static_cast<std::size_t>(id.second);
  const std::size_t before = (j - 1) * dd - (j - 1) * (j - 2) / 2;
  return 1 + dd + before + (k - j);
}

BlockId block_at(int d, std::size_t b) {
  const auto dd = static_cast<std::size_t>(d);
  if (b == 0) return BlockId::value();
  if (b <= dd) return BlockId::partial(static_cast<int>(b));
  std::size_t rest = b - 1 - dd;
  for (int j = 1; j <= d; ++j) {
    const auto row = static_cast<std::size_t>(d - j + 1);
    if (rest < row) return BlockId::partial(j, j + static_cast<int>(rest));
    rest -= row;
  }
  throw InvalidArgument("block_at: block index out of range");
}

std::string block_name(int d, BlockId id) {
  block_index(d, id);
  if (id.first == 0) return "f";
  if (id.second == 0) return "d" + std::to_string(id.first);
  if (d <= 9) return "d" + std::to_string(id.first) + std::to_string(id.second);
  return "d" + std::to_string(id.first) + "_" + std::to_string(id.second);
}

BlockId parse_block_name(int d, const std::string& name) {
  auto fail = [&]() -> BlockId { throw InvalidArgument("unknown block name '" + name + "'"); };
  if (name == "f") return BlockId::value();
  if (name.size() < 2 || name[0] != 'd') return fail();
  const std::string body = name.substr(1);
  for (char c : body) {
    if (!std::isdigit(static_cast<unsigned char>(c)) && c != '_') return fail();
  }
  BlockId id;
  if (const auto sep = body.find('_'); sep != std::string::npos) {
    if (sep == 0 || sep + 1 == body.size()) return fail();
    id = BlockId::partial(std::stoi(body.substr(0, sep)), std::stoi(body.substr(sep + 1)));
  } else if (d <= 9 && body.size() == 2) {
    id = BlockId{body[0] - '0', body[1] - '0'};
  } else if (body.size() <= 2 || d > 9) {
    id = BlockId::partial(std::stoi(body));
  } else {
    return fail();
  }
  if (id.first < 1 || id.first > d || id.second > d || (id.second != 0 && id.second < id.first)) return fail();
  return id;
}

}  // namespace mvga
