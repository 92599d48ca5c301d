// Unlabelled rooted binary tree shapes.
//
// A TreeShape is an immutable, structurally shared value. Children are
// always kept in canonical order, so two shapes are equal exactly when
// their encodings are equal. The encoding doubles as the wire format:
//
//     leaf         ->  *
//     node(a, b)   ->  (enc(a),enc(b))   with a <= b
//
// Shapes are ordered first by leaf count and then by encoding under the
// collation  * < ( < , < ) . With that collation the comb comes first in
// every RB_U(n), e.g. RB_U(4) = [Comb_4, Bal_4] and
// RB_U(5) = [Comb_5, Gir_5, Bal_5].

#ifndef TREEPOLY_SHAPE_HPP
#define TREEPOLY_SHAPE_HPP

#include <compare>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "treepoly/rational.hpp"

namespace treepoly {

/// Raised for invalid sizes, subsets and other precondition failures.
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when a computation would exceed the configured resource caps.
class ResourceLimitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public std::invalid_argument {
 public:
  ParseError(const std::string& message, std::size_t position);
  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

class TreeShape {
 public:
  /// The single-leaf shape.
  TreeShape();

  static TreeShape leaf() { return TreeShape(); }
  /// Joins two shapes under a new root, swapping them into canonical order.
  static TreeShape join(const TreeShape& a, const TreeShape& b);

  bool is_leaf() const noexcept;
  int leaf_count() const noexcept;
  const std::string& encoding() const noexcept;

  /// Children of an internal node (left <= right). Throws on a leaf.
  const TreeShape& left() const;
  const TreeShape& right() const;

  /// Number of internal nodes whose two child subtrees are equal shapes.
  int symmetric_nodes() const noexcept;

  friend bool operator==(const TreeShape& a, const TreeShape& b) noexcept;
  friend std::strong_ordering operator<=>(const TreeShape& a, const TreeShape& b) noexcept;

  struct Node;  // implementation detail

 private:
  explicit TreeShape(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

/// Compares two encodings under the canonical collation (leaf count first).
std::strong_ordering compare_encodings(std::string_view a, std::string_view b) noexcept;

TreeShape parse_shape(std::string_view text);
std::string serialize_shape(const TreeShape& shape);

/// Display name for the shapes that have one (Comb_n, Bal_4, Gir_5, Bal_5),
/// the encoding otherwise.
std::string shape_name(const TreeShape& shape);

/// All shapes with n leaves in canonical order, with reverse lookup.
class ShapeIndex {
 public:
  ShapeIndex(int n, std::vector<TreeShape> shapes);

  int leaves() const noexcept { return n_; }
  std::size_t size() const noexcept { return shapes_.size(); }
  const std::vector<TreeShape>& shapes() const noexcept { return shapes_; }
  const TreeShape& operator[](std::size_t i) const { return shapes_.at(i); }

  std::optional<std::size_t> find(const TreeShape& shape) const;
  std::optional<std::size_t> find(const std::string& encoding) const;
  /// Like find() but throws DomainError when the shape is absent.
  std::size_t index_of(const TreeShape& shape) const;

  auto begin() const noexcept { return shapes_.begin(); }
  auto end() const noexcept { return shapes_.end(); }

 private:
  int n_;
  std::vector<TreeShape> shapes_;
  std::unordered_map<std::string, std::size_t> lookup_;
};

/// Wedderburn-Etherington number |RB_U(n)|, computed without enumerating.
BigInt shape_count(int n);

/// Enumerates RB_U(n). Results are cached and shared between threads.
std::shared_ptr<const ShapeIndex> enumerate_shapes(int n);

TreeShape build_comb(int n);
TreeShape build_bicomb(int i, int j);
/// Comb with k leaves whose deepest cherry has one leaf replaced by `tree`.
TreeShape build_comb_replace(const TreeShape& tree, int k);
/// Complete symmetric tree on 2^depth leaves.
TreeShape build_complete(int depth);
/// The unique shape whose every internal node splits ceil(n/2) | floor(n/2).
TreeShape build_max_balanced(int n);

/// |O(T)| = n! / 2^s(T): labelled trees with this shape.
BigInt labeling_count(const TreeShape& shape);

/// Sorted leaf positions, 0-based, in the canonical left-to-right order.
class LeafSubset {
 public:
  LeafSubset() = default;
  /// Sorts and validates; throws DomainError on duplicates or negatives.
  explicit LeafSubset(std::vector<int> indices);

  const std::vector<int>& indices() const noexcept { return indices_; }
  std::size_t size() const noexcept { return indices_.size(); }
  bool empty() const noexcept { return indices_.empty(); }

 private:
  std::vector<int> indices_;
};

/// Shape induced on the leaves in `subset` after suppressing degree-2 nodes.
TreeShape restrict_shape(const TreeShape& tree, const LeafSubset& subset);

/// Number of |P|-subsets S of the leaves of T with T|_S = P.
BigInt count_pattern(const TreeShape& tree, const TreeShape& pattern);
/// Exhaustive scan over all |P|-subsets. Requires leaf_count(T) <= 63.
BigInt count_pattern_scan(const TreeShape& tree, const TreeShape& pattern);
/// Bottom-up dynamic program over T and the distinct subshapes of P.
BigInt count_pattern_dp(const TreeShape& tree, const TreeShape& pattern);

/// Restriction counts of every n-leaf shape in T, indexed like
/// enumerate_shapes(n). Uses a single subset scan within the scan cap,
/// otherwise a single DP pass over all shapes with at most n leaves.
std::vector<BigInt> count_all_patterns(const TreeShape& tree, int n);

}  // namespace treepoly

template <>
struct std::hash<treepoly::TreeShape> {
  std::size_t operator()(const treepoly::TreeShape& shape) const noexcept {
    return std::hash<std::string>{}(shape.encoding());
  }
};

#endif  // TREEPOLY_SHAPE_HPP
