#include "treepoly/shape.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <map>
#include <mutex>

#include "treepoly/config.hpp"

namespace treepoly {

struct TreeShape::Node {
  std::vector<TreeShape> children;  // empty for a leaf, else {left, right}
  int leaves = 1;
  int symmetric = 0;
  std::string encoding = "*";
};

ParseError::ParseError(const std::string& message, std::size_t position)
    : std::invalid_argument(message + " at position " + std::to_string(position)), position_(position) {}

namespace {

const std::shared_ptr<const TreeShape::Node>& leaf_node();

constexpr int collation_rank(char c) noexcept {
  switch (c) {
    case '*': return 0;
    case '(': return 1;
    case ',': return 2;
    case ')': return 3;
    default: return 4 + static_cast<unsigned char>(c);
  }
}

}  // namespace

std::strong_ordering compare_encodings(std::string_view a, std::string_view b) noexcept {
  // Leaf count is the number of '*' symbols.
  const auto leaves_a = std::count(a.begin(), a.end(), '*');
  const auto leaves_b = std::count(b.begin(), b.end(), '*');
  if (leaves_a != leaves_b) return leaves_a <=> leaves_b;
  const std::size_t common = std::min(a.size(), b.size());
  for (std::size_t i = 0; i < common; ++i) {
    if (a[i] != b[i]) return collation_rank(a[i]) <=> collation_rank(b[i]);
  }
  return a.size() <=> b.size();
}

namespace {

struct LeafHolder {
  std::shared_ptr<const TreeShape::Node> node = std::make_shared<const TreeShape::Node>();
};

const std::shared_ptr<const TreeShape::Node>& leaf_node() {
  static const LeafHolder holder;
  return holder.node;
}

}  // namespace

TreeShape::TreeShape() : node_(leaf_node()) {}

TreeShape TreeShape::join(const TreeShape& a, const TreeShape& b) {
  auto node = std::make_shared<Node>();
  const bool swap = compare_encodings(a.encoding(), b.encoding()) > 0;
  const TreeShape& lo = swap ? b : a;
  const TreeShape& hi = swap ? a : b;
  node->leaves = lo.leaf_count() + hi.leaf_count();
  node->symmetric = lo.symmetric_nodes() + hi.symmetric_nodes() + (lo == hi ? 1 : 0);
  node->encoding.reserve(lo.encoding().size() + hi.encoding().size() + 3);
  node->encoding = "(";
  node->encoding += lo.encoding();
  node->encoding += ',';
  node->encoding += hi.encoding();
  node->encoding += ')';
  node->children = {lo, hi};
  return TreeShape(std::move(node));
}

bool TreeShape::is_leaf() const noexcept { return node_->children.empty(); }
int TreeShape::leaf_count() const noexcept { return node_->leaves; }
const std::string& TreeShape::encoding() const noexcept { return node_->encoding; }
int TreeShape::symmetric_nodes() const noexcept { return node_->symmetric; }

const TreeShape& TreeShape::left() const {
  if (is_leaf()) throw DomainError("a leaf has no children");
  return node_->children[0];
}

const TreeShape& TreeShape::right() const {
  if (is_leaf()) throw DomainError("a leaf has no children");
  return node_->children[1];
}

bool operator==(const TreeShape& a, const TreeShape& b) noexcept {
  return a.node_ == b.node_ || a.node_->encoding == b.node_->encoding;
}

std::strong_ordering operator<=>(const TreeShape& a, const TreeShape& b) noexcept {
  if (a.leaf_count() != b.leaf_count()) return a.leaf_count() <=> b.leaf_count();
  return compare_encodings(a.encoding(), b.encoding());
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

class ShapeParser {
 public:
  explicit ShapeParser(std::string_view text) : text_(text) {}

  TreeShape parse() {
    skip_space();
    if (pos_ == text_.size()) throw ParseError("empty shape", pos_);
    TreeShape result = parse_node();
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == ';') {
      ++pos_;
      skip_space();
    }
    if (pos_ != text_.size()) throw ParseError("unexpected trailing input", pos_);
    return result;
  }

 private:
  void skip_space() {
    while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t' || text_[pos_] == '\n' ||
                                   text_[pos_] == '\r')) {
      ++pos_;
    }
  }

  void expect(char c) {
    skip_space();
    if (pos_ >= text_.size()) {
      throw ParseError(std::string("expected '") + c + "' but input ended", pos_);
    }
    if (text_[pos_] != c) {
      if (c == ')' && text_[pos_] == ',') throw ParseError("non-binary node", pos_);
      throw ParseError(std::string("expected '") + c + "'", pos_);
    }
    ++pos_;
  }

  TreeShape parse_node() {
    skip_space();
    if (pos_ >= text_.size()) throw ParseError("unbalanced parentheses", pos_);
    const char c = text_[pos_];
    if (c == '*') {
      ++pos_;
      return TreeShape::leaf();
    }
    if (c != '(') throw ParseError(std::string("unexpected character '") + c + "'", pos_);
    const std::size_t open = pos_;
    ++pos_;
    if (++depth_ > kMaxDepth) throw ParseError("nesting too deep", pos_);
    TreeShape a = parse_node();
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == ')') throw ParseError("non-binary node", open);
    if (pos_ >= text_.size()) throw ParseError("unbalanced parentheses", pos_);
    expect(',');
    TreeShape b = parse_node();
    expect(')');
    --depth_;
    return TreeShape::join(a, b);
  }

  static constexpr int kMaxDepth = 100000;
  std::string_view text_;
  std::size_t pos_ = 0;
  int depth_ = 0;
};

}  // namespace

TreeShape parse_shape(std::string_view text) { return ShapeParser(text).parse(); }

std::string serialize_shape(const TreeShape& shape) { return shape.encoding(); }

std::string shape_name(const TreeShape& shape) {
  const int n = shape.leaf_count();
  if (n == 1) return "Leaf";
  if (shape == build_comb(n)) return "Comb_" + std::to_string(n);
  if (n == 4 && shape == build_complete(2)) return "Bal_4";
  if (n == 5 && shape == build_comb_replace(build_complete(2), 2)) return "Gir_5";
  if (n == 5 && shape == build_bicomb(2, 3)) return "Bal_5";
  return shape.encoding();
}

// ---------------------------------------------------------------------------
// Enumeration

ShapeIndex::ShapeIndex(int n, std::vector<TreeShape> shapes) : n_(n), shapes_(std::move(shapes)) {
  lookup_.reserve(shapes_.size());
  for (std::size_t i = 0; i < shapes_.size(); ++i) lookup_.emplace(shapes_[i].encoding(), i);
}

std::optional<std::size_t> ShapeIndex::find(const std::string& encoding) const {
  auto it = lookup_.find(encoding);
  if (it == lookup_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::size_t> ShapeIndex::find(const TreeShape& shape) const { return find(shape.encoding()); }

std::size_t ShapeIndex::index_of(const TreeShape& shape) const {
  if (auto i = find(shape)) return *i;
  throw DomainError("shape " + shape.encoding() + " is not in RB_U(" + std::to_string(n_) + ")");
}

BigInt shape_count(int n) {
  if (n < 1) throw DomainError("shape_count needs n >= 1");
  std::vector<BigInt> a(static_cast<std::size_t>(n) + 1, 0);
  a[1] = 1;
  for (int k = 2; k <= n; ++k) {
    BigInt total = 0;
    for (int i = 1; 2 * i < k; ++i) total += a[i] * a[k - i];
    if (k % 2 == 0) total += a[k / 2] * (a[k / 2] + 1) / 2;
    a[k] = total;
  }
  return a[n];
}

namespace {

std::mutex g_enum_mutex;
std::map<int, std::shared_ptr<const ShapeIndex>> g_enum_cache;

std::shared_ptr<const ShapeIndex> enumerate_locked(int n) {
  if (auto it = g_enum_cache.find(n); it != g_enum_cache.end()) return it->second;
  std::vector<TreeShape> shapes;
  if (n == 1) {
    shapes.push_back(TreeShape::leaf());
  } else {
    for (int i = 1; 2 * i <= n; ++i) {
      auto small = enumerate_locked(i);
      auto large = enumerate_locked(n - i);
      for (std::size_t a = 0; a < small->size(); ++a) {
        const std::size_t first_b = (2 * i == n) ? a : 0;
        for (std::size_t b = first_b; b < large->size(); ++b) {
          shapes.push_back(TreeShape::join((*small)[a], (*large)[b]));
        }
      }
    }
    std::sort(shapes.begin(), shapes.end());
  }
  auto index = std::make_shared<const ShapeIndex>(n, std::move(shapes));
  g_enum_cache.emplace(n, index);
  return index;
}

}  // namespace

std::shared_ptr<const ShapeIndex> enumerate_shapes(int n) {
  if (n < 1) throw DomainError("enumerate_shapes needs n >= 1");
  std::lock_guard lock(g_enum_mutex);
  return enumerate_locked(n);
}

// ---------------------------------------------------------------------------
// Builders

TreeShape build_comb(int n) {
  if (n < 1) throw DomainError("comb needs at least one leaf");
  TreeShape t;
  for (int i = 1; i < n; ++i) t = TreeShape::join(TreeShape::leaf(), t);
  return t;
}

TreeShape build_bicomb(int i, int j) {
  if (i < 1 || j < 1) throw DomainError("bicomb sides need at least one leaf");
  return TreeShape::join(build_comb(i), build_comb(j));
}

TreeShape build_comb_replace(const TreeShape& tree, int k) {
  if (k < 2) throw DomainError("comb_replace needs a comb with k >= 2 leaves");
  TreeShape t = tree;
  for (int i = 1; i < k; ++i) t = TreeShape::join(TreeShape::leaf(), t);
  return t;
}

TreeShape build_complete(int depth) {
  if (depth < 0 || depth > 20) throw DomainError("complete tree depth must be in [0, 20]");
  TreeShape t;
  for (int d = 0; d < depth; ++d) t = TreeShape::join(t, t);
  return t;
}

TreeShape build_max_balanced(int n) {
  if (n < 1) throw DomainError("max_balanced needs n >= 1");
  // Only O(log n) distinct sizes occur; memoize them per call.
  std::map<int, TreeShape> memo;
  memo.emplace(1, TreeShape::leaf());
  auto build = [&](auto&& self, int k) -> TreeShape {
    if (auto it = memo.find(k); it != memo.end()) return it->second;
    TreeShape t = TreeShape::join(self(self, (k + 1) / 2), self(self, k / 2));
    memo.emplace(k, t);
    return t;
  };
  return build(build, n);
}

BigInt labeling_count(const TreeShape& shape) {
  return factorial(shape.leaf_count()) >> static_cast<unsigned>(shape.symmetric_nodes());
}

// ---------------------------------------------------------------------------
// Restriction

LeafSubset::LeafSubset(std::vector<int> indices) : indices_(std::move(indices)) {
  std::sort(indices_.begin(), indices_.end());
  for (std::size_t i = 0; i < indices_.size(); ++i) {
    if (indices_[i] < 0) throw DomainError("leaf index must be non-negative");
    if (i > 0 && indices_[i] == indices_[i - 1]) throw DomainError("duplicate leaf index in subset");
  }
}

namespace {

using IndexIter = std::vector<int>::const_iterator;

// Restricts `t` (whose leaves are numbered from `offset`) to the selected
// indices in [first, last), all of which fall inside t's leaf range.
std::optional<TreeShape> restrict_range(const TreeShape& t, int offset, IndexIter first, IndexIter last) {
  if (first == last) return std::nullopt;
  if (t.is_leaf()) return t;
  if (last - first == t.leaf_count()) return t;
  const int split = offset + t.left().leaf_count();
  IndexIter mid = std::lower_bound(first, last, split);
  auto a = restrict_range(t.left(), offset, first, mid);
  auto b = restrict_range(t.right(), split, mid, last);
  if (!a) return b;
  if (!b) return a;
  return TreeShape::join(*a, *b);
}

}  // namespace

TreeShape restrict_shape(const TreeShape& tree, const LeafSubset& subset) {
  if (subset.empty()) throw DomainError("restriction to an empty leaf set");
  if (subset.indices().back() >= tree.leaf_count()) {
    throw DomainError("leaf index " + std::to_string(subset.indices().back()) + " out of range for a " +
                      std::to_string(tree.leaf_count()) + "-leaf shape");
  }
  return *restrict_range(tree, 0, subset.indices().begin(), subset.indices().end());
}

// ---------------------------------------------------------------------------
// Pattern counting

namespace {

// Flattened tree used by the subset scan: node ranges as bitmasks.
struct FlatTree {
  struct FlatNode {
    int left = -1;
    int right = -1;
    std::uint64_t mask = 0;
  };
  std::vector<FlatNode> nodes;
  int root = -1;

  explicit FlatTree(const TreeShape& t) {
    int next_leaf = 0;
    root = add(t, next_leaf);
  }

  int add(const TreeShape& t, int& next_leaf) {
    FlatNode node;
    if (t.is_leaf()) {
      node.mask = std::uint64_t{1} << next_leaf++;
    } else {
      node.left = add(t.left(), next_leaf);
      node.right = add(t.right(), next_leaf);
      node.mask = nodes[node.left].mask | nodes[node.right].mask;
    }
    nodes.push_back(node);
    return static_cast<int>(nodes.size()) - 1;
  }

  // Canonical encoding of the restriction to `mask` (mask must meet node).
  void encode(int id, std::uint64_t mask, std::string& out) const {
    const FlatNode* node = &nodes[id];
    for (;;) {
      if (node->left < 0) {
        out += '*';
        return;
      }
      const bool in_left = (nodes[node->left].mask & mask) != 0;
      const bool in_right = (nodes[node->right].mask & mask) != 0;
      if (in_left && in_right) break;
      node = &nodes[in_left ? node->left : node->right];
    }
    std::string a;
    std::string b;
    encode(node->left, mask, a);
    encode(node->right, mask, b);
    if (compare_encodings(a, b) > 0) std::swap(a, b);
    out += '(';
    out += a;
    out += ',';
    out += b;
    out += ')';
  }
};

template <typename Visit>
void for_each_subset_mask(int m, int n, Visit&& visit) {
  if (n == 0 || n > m) return;
  const std::uint64_t limit = (m == 64) ? 0 : (std::uint64_t{1} << m);
  std::uint64_t mask = (n == 64) ? ~std::uint64_t{0} : ((std::uint64_t{1} << n) - 1);
  for (;;) {
    visit(mask);
    // Gosper's hack: next mask with the same popcount.
    const std::uint64_t c = mask & (~mask + 1);
    const std::uint64_t r = mask + c;
    if (r == 0) return;
    mask = (((r ^ mask) >> 2) / c) | r;
    if (limit != 0 && mask >= limit) return;
  }
}

void check_scan_size(const TreeShape& tree) {
  if (tree.leaf_count() > 63) throw DomainError("subset scan supports at most 63 leaves");
}

}  // namespace

BigInt count_pattern_scan(const TreeShape& tree, const TreeShape& pattern) {
  const int m = tree.leaf_count();
  const int n = pattern.leaf_count();
  if (n > m) return 0;
  check_scan_size(tree);
  FlatTree flat(tree);
  std::uint64_t count = 0;
  std::string buffer;
  for_each_subset_mask(m, n, [&](std::uint64_t mask) {
    buffer.clear();
    flat.encode(flat.root, mask, buffer);
    if (buffer == pattern.encoding()) ++count;
  });
  return BigInt(count);
}

namespace {

// Subshapes of P in increasing leaf count, with child indices.
struct PatternTable {
  std::vector<TreeShape> shapes;
  std::vector<std::pair<int, int>> children;  // (-1,-1) for the leaf
  std::unordered_map<std::string, int> lookup;

  int add(const TreeShape& t) {
    if (auto it = lookup.find(t.encoding()); it != lookup.end()) return it->second;
    std::pair<int, int> kids{-1, -1};
    if (!t.is_leaf()) kids = {add(t.left()), add(t.right())};
    shapes.push_back(t);
    children.push_back(kids);
    const int id = static_cast<int>(shapes.size()) - 1;
    lookup.emplace(t.encoding(), id);
    return id;
  }
};

// counts[q] = number of |Q|-subsets of t's leaves restricting to Q.
std::vector<BigInt> pattern_counts(const TreeShape& t, const PatternTable& table, int leaf_id) {
  std::vector<BigInt> counts(table.shapes.size(), 0);
  if (t.is_leaf()) {
    counts[leaf_id] = 1;
    return counts;
  }
  const auto a = pattern_counts(t.left(), table, leaf_id);
  const auto b = pattern_counts(t.right(), table, leaf_id);
  for (std::size_t q = 0; q < counts.size(); ++q) {
    counts[q] = a[q] + b[q];
    const auto [x, y] = table.children[q];
    if (x < 0) continue;
    if (x == y) {
      counts[q] += a[x] * b[x];
    } else {
      counts[q] += a[x] * b[y] + a[y] * b[x];
    }
  }
  return counts;
}

}  // namespace

BigInt count_pattern_dp(const TreeShape& tree, const TreeShape& pattern) {
  if (pattern.leaf_count() > tree.leaf_count()) return 0;
  PatternTable table;
  const int leaf_id = table.add(TreeShape::leaf());
  const int target = table.add(pattern);
  return pattern_counts(tree, table, leaf_id)[target];
}

namespace {

bool scan_allowed(int m, int n) {
  if (m > 63) return false;
  return binomial(m, n) <= BigInt(caps().max_scan);
}

}  // namespace

BigInt count_pattern(const TreeShape& tree, const TreeShape& pattern) {
  if (pattern.leaf_count() > tree.leaf_count()) return 0;
  if (scan_allowed(tree.leaf_count(), pattern.leaf_count())) return count_pattern_scan(tree, pattern);
  return count_pattern_dp(tree, pattern);
}

std::vector<BigInt> count_all_patterns(const TreeShape& tree, int n) {
  const int m = tree.leaf_count();
  if (n < 1 || n > m) throw DomainError("pattern size must be in [1, leaf_count]");
  const auto index = enumerate_shapes(n);
  std::vector<BigInt> result(index->size(), 0);

  if (scan_allowed(m, n)) {
    FlatTree flat(tree);
    std::vector<std::uint64_t> tally(index->size(), 0);
    std::string buffer;
    for_each_subset_mask(m, n, [&](std::uint64_t mask) {
      buffer.clear();
      flat.encode(flat.root, mask, buffer);
      ++tally[*index->find(buffer)];
    });
    for (std::size_t i = 0; i < tally.size(); ++i) result[i] = tally[i];
    return result;
  }

  // One DP pass over every shape with at most n leaves.
  PatternTable table;
  const int leaf_id = table.add(TreeShape::leaf());
  for (int k = 2; k <= n; ++k) {
    for (const auto& s : *enumerate_shapes(k)) table.add(s);
  }
  const auto counts = pattern_counts(tree, table, leaf_id);
  for (std::size_t i = 0; i < index->size(); ++i) result[i] = counts[table.lookup.at((*index)[i].encoding())];
  return result;
}

}  // namespace treepoly
