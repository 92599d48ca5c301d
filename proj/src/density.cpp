#include "treepoly/density.hpp"

#include <optional>
#include <ostream>

#include <json.hpp>

#include "treepoly/config.hpp"

namespace treepoly {

ShapeDistribution::ShapeDistribution(int n, RationalVector probs)
    : n_(n), probs_(std::move(probs)), index_(enumerate_shapes(n)) {
  if (probs_.size() != index_->size()) {
    throw DomainError("distribution over RB_U(" + std::to_string(n) + ") needs " + std::to_string(index_->size()) +
                      " entries, got " + std::to_string(probs_.size()));
  }
  Rational total = 0;
  for (const auto& p : probs_) {
    if (p < 0) throw DomainError("negative probability " + to_string(p));
    total += p;
  }
  if (total != 1) throw DomainError("probabilities sum to " + to_string(total) + ", not 1");
}

ShapeDistribution ShapeDistribution::point_mass(const TreeShape& shape) {
  const auto index = enumerate_shapes(shape.leaf_count());
  RationalVector probs(index->size(), 0);
  probs[index->index_of(shape)] = 1;
  return ShapeDistribution(shape.leaf_count(), std::move(probs));
}

const Rational& ShapeDistribution::at(const TreeShape& shape) const { return probs_.at(index_->index_of(shape)); }

const ShapeDistribution& DensityMatrix::column(const TreeShape& tree) const {
  for (std::size_t i = 0; i < trees.size(); ++i) {
    if (trees[i] == tree) return columns[i];
  }
  throw DomainError("shape " + tree.encoding() + " is not a column of this density matrix");
}

ShapeDistribution density_row(const TreeShape& tree, int n) {
  const int m = tree.leaf_count();
  if (n < 1 || n > m) {
    throw DomainError("density_row needs 1 <= n <= " + std::to_string(m) + ", got n = " + std::to_string(n));
  }
  const auto counts = count_all_patterns(tree, n);
  const BigInt total = binomial(m, n);
  RationalVector probs;
  probs.reserve(counts.size());
  for (const auto& c : counts) probs.emplace_back(c, total);
  return ShapeDistribution(n, std::move(probs));
}

DensityMatrix density_matrix(int n, int m) {
  if (n < 2 || n > m) throw DomainError("density_matrix needs 2 <= n <= m");
  const Caps limits = caps();
  if (shape_count(m) > BigInt(limits.max_columns)) {
    throw ResourceLimitError("|RB_U(" + std::to_string(m) + ")| = " + to_string(shape_count(m)) +
                             " exceeds the column cap of " + std::to_string(limits.max_columns) +
                             " (raise it with TREEPOLY_CAPS=max_columns=...)");
  }
  const auto trees = enumerate_shapes(m);
  std::vector<std::optional<ShapeDistribution>> slots(trees->size());
  parallel_for(trees->size(), [&](std::size_t i) { slots[i].emplace(density_row((*trees)[i], n)); });

  DensityMatrix result;
  result.n = n;
  result.m = m;
  result.trees = trees->shapes();
  result.columns.reserve(slots.size());
  for (auto& slot : slots) result.columns.push_back(std::move(*slot));
  return result;
}

ShapeDistribution marginalize(const ShapeDistribution& p, int n) {
  const int m = p.leaves();
  if (n < 1 || n > m) {
    throw DomainError("cannot marginalize a distribution on " + std::to_string(m) + " leaves to " +
                      std::to_string(n) + " leaves");
  }
  if (n == m) return p;
  const auto targets = enumerate_shapes(n);
  RationalVector out(targets->size(), 0);
  for (std::size_t t = 0; t < p.size(); ++t) {
    if (p[t] == 0) continue;
    const auto column = density_row(p.index()[t], n);
    for (std::size_t s = 0; s < out.size(); ++s) out[s] += p[t] * column[s];
  }
  return ShapeDistribution(n, std::move(out));
}

std::string csv_field(const std::string& text) {
  if (text.find_first_of(",\"\n") == std::string::npos) return text;
  std::string quoted = "\"";
  for (char c : text) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  quoted += '"';
  return quoted;
}

void write_density_csv(const DensityMatrix& matrix, std::ostream& out) {
  const auto rows = enumerate_shapes(matrix.n);
  out << "tree";
  for (const auto& s : *rows) out << ',' << csv_field(s.encoding());
  out << '\n';
  for (std::size_t i = 0; i < matrix.trees.size(); ++i) {
    out << csv_field(matrix.trees[i].encoding());
    for (const auto& v : matrix.columns[i].probs()) out << ',' << to_string(v);
    out << '\n';
  }
}

std::string density_to_json(const DensityMatrix& matrix) {
  nlohmann::ordered_json j;
  j["n"] = matrix.n;
  j["m"] = matrix.m;
  auto& rows = j["rows"] = nlohmann::ordered_json::array();
  for (const auto& s : *enumerate_shapes(matrix.n)) rows.push_back(s.encoding());
  auto& cols = j["columns"] = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < matrix.trees.size(); ++i) {
    nlohmann::ordered_json col;
    col["tree"] = matrix.trees[i].encoding();
    auto& density = col["density"] = nlohmann::ordered_json::array();
    for (const auto& v : matrix.columns[i].probs()) density.push_back(to_string(v));
    cols.push_back(std::move(col));
  }
  return j.dump(2);
}

std::string distribution_to_json(const ShapeDistribution& p) {
  nlohmann::ordered_json j;
  j["n"] = p.leaves();
  auto shapes = nlohmann::ordered_json::array();
  auto probs = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < p.size(); ++i) {
    shapes.push_back(p.index()[i].encoding());
    probs.push_back(to_string(p[i]));
  }
  j["shapes"] = std::move(shapes);
  j["probs"] = std::move(probs);
  return j.dump(2);
}

ShapeDistribution distribution_from_json(const std::string& text) {
  try {
    const auto j = nlohmann::json::parse(text);
    const int n = j.at("n").get<int>();
    RationalVector probs;
    for (const auto& v : j.at("probs")) probs.push_back(parse_rational(v.get<std::string>()));
    return ShapeDistribution(n, std::move(probs));
  } catch (const nlohmann::json::exception& e) {
    throw DomainError(std::string("malformed distribution JSON: ") + e.what());
  }
}

}  // namespace treepoly
