// Induced subtree densities and the marginalization map in shape
// coordinates.

#ifndef TREEPOLY_DENSITY_HPP
#define TREEPOLY_DENSITY_HPP

#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "treepoly/rational.hpp"
#include "treepoly/shape.hpp"

namespace treepoly {

/// Exact probability vector over RB_U(n), indexed like enumerate_shapes(n).
class ShapeDistribution {
 public:
  /// Throws DomainError unless probs has |RB_U(n)| non-negative entries
  /// summing to exactly one.
  ShapeDistribution(int n, RationalVector probs);

  static ShapeDistribution point_mass(const TreeShape& shape);

  int leaves() const noexcept { return n_; }
  std::size_t size() const noexcept { return probs_.size(); }
  const RationalVector& probs() const noexcept { return probs_; }
  const Rational& operator[](std::size_t i) const { return probs_.at(i); }
  const Rational& at(const TreeShape& shape) const;
  const ShapeIndex& index() const { return *index_; }

  friend bool operator==(const ShapeDistribution& a, const ShapeDistribution& b) {
    return a.n_ == b.n_ && a.probs_ == b.probs_;
  }

 private:
  int n_;
  RationalVector probs_;
  std::shared_ptr<const ShapeIndex> index_;
};

/// Columns are pi_n(p_T) for every T in RB_U(m), in canonical order.
struct DensityMatrix {
  int n = 0;
  int m = 0;
  std::vector<TreeShape> trees;
  std::vector<ShapeDistribution> columns;

  const ShapeDistribution& column(const TreeShape& tree) const;
};

/// Fraction of n-subsets of T's leaves whose restriction is each n-leaf shape.
ShapeDistribution density_row(const TreeShape& tree, int n);

/// Throws ResourceLimitError when |RB_U(m)| exceeds caps().max_columns.
DensityMatrix density_matrix(int n, int m);

/// pi_n applied to a distribution over RB_U(m).
ShapeDistribution marginalize(const ShapeDistribution& p, int n);

void write_density_csv(const DensityMatrix& matrix, std::ostream& out);
std::string density_to_json(const DensityMatrix& matrix);
std::string distribution_to_json(const ShapeDistribution& p);
/// Reads {"n": int, "probs": ["p/q", ...]}.
ShapeDistribution distribution_from_json(const std::string& text);

/// Quotes a CSV field when it contains a comma, quote or newline.
std::string csv_field(const std::string& text);

}  // namespace treepoly

#endif  // TREEPOLY_DENSITY_HPP
