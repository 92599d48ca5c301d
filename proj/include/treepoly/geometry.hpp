// Exact convex geometry on finite point sets: vertex certification,
// membership and containment, all decided by exact LPs.

#ifndef TREEPOLY_GEOMETRY_HPP
#define TREEPOLY_GEOMETRY_HPP

#include <optional>
#include <string>
#include <vector>

#include "treepoly/density.hpp"
#include "treepoly/lp.hpp"
#include "treepoly/rational.hpp"

namespace treepoly {

/// Points of a common dimension, each tagged with where it came from
/// (usually the encoding of the tree T whose projection it is).
class PointSet {
 public:
  explicit PointSet(std::size_t dimension) : dimension_(dimension) {}

  /// Throws DomainError on a dimension mismatch.
  void add(RationalVector point, std::string provenance = {});

  std::size_t dimension() const noexcept { return dimension_; }
  std::size_t size() const noexcept { return points_.size(); }
  bool empty() const noexcept { return points_.empty(); }
  const std::vector<RationalVector>& points() const noexcept { return points_; }
  const RationalVector& operator[](std::size_t i) const { return points_.at(i); }
  const std::vector<std::string>& provenance() const noexcept { return provenance_; }

  /// Columns of a density matrix, tagged with their tree encodings.
  static PointSet from_density(const DensityMatrix& matrix);

 private:
  std::size_t dimension_;
  std::vector<RationalVector> points_;
  std::vector<std::string> provenance_;
};

/// A point set with its certified vertices. Input points may repeat; the
/// vertex list names each distinct vertex once, by its first occurrence.
class Polytope {
 public:
  Polytope(PointSet points, std::vector<std::size_t> vertices);

  const PointSet& points() const noexcept { return points_; }
  std::size_t dimension() const noexcept { return points_.dimension(); }
  /// Indices into points(), ascending.
  const std::vector<std::size_t>& vertices() const noexcept { return vertices_; }
  std::vector<RationalVector> vertex_points() const;
  /// True when point i (or a duplicate of it) is a certified vertex.
  bool is_vertex_point(std::size_t i) const;
  /// True when some input point equals `point` and is a vertex.
  bool has_vertex(const RationalVector& point) const;
  /// Provenance of every input point equal to vertex `v`.
  std::vector<std::string> vertex_provenance(std::size_t v) const;

 private:
  PointSet points_;
  std::vector<std::size_t> vertices_;
};

/// Outcome of a membership LP: a convex combination when inside, else a
/// Farkas certificate for the system  sum lambda_j p_j = x, sum lambda = 1.
struct Membership {
  bool inside = false;
  RationalVector weights;
  RationalVector certificate;
};

Membership convex_membership(const std::vector<RationalVector>& generators, const RationalVector& point);

/// Point i is a vertex iff it is not a convex combination of the other
/// distinct points.
Polytope certify_vertices(const PointSet& points);

struct Containment {
  bool contained = true;
  /// Index into inner.points() of a vertex outside `outer`.
  std::optional<std::size_t> witness;
};

Containment contains_polytope(const Polytope& inner, const Polytope& outer);

/// Sub-polytope of the points whose `coordinate` is exactly zero.
Polytope face_restrict(const Polytope& poly, std::size_t coordinate);

/// EX_n^m = conv(pi_n(p_T) : T in RB_U(m)), with certified vertices.
Polytope sampling_polytope(int n, int m);

/// Drops the last coordinate.
RationalVector project_drop_last(const RationalVector& point);

/// Vertices of a polytope whose points span a plane after dropping the
/// last coordinate, ordered counter-clockwise starting from the
/// lexicographically smallest. Throws DomainError unless dimension is 3.
std::vector<std::size_t> boundary_cycle_2d(const Polytope& poly);

/// {dim, points, vertices, provenance} with exact p/q entries.
std::string polytope_to_json(const Polytope& poly);

}  // namespace treepoly

#endif  // TREEPOLY_GEOMETRY_HPP
