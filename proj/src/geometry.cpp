#include "treepoly/geometry.hpp"

#include <algorithm>
#include <map>

#include <json.hpp>

#include "treepoly/config.hpp"

namespace treepoly {

void PointSet::add(RationalVector point, std::string provenance) {
  if (point.size() != dimension_) {
    throw DomainError("point of dimension " + std::to_string(point.size()) + " added to a set of dimension " +
                      std::to_string(dimension_));
  }
  points_.push_back(std::move(point));
  provenance_.push_back(std::move(provenance));
}

PointSet PointSet::from_density(const DensityMatrix& matrix) {
  PointSet set(enumerate_shapes(matrix.n)->size());
  for (std::size_t i = 0; i < matrix.columns.size(); ++i) {
    set.add(matrix.columns[i].probs(), matrix.trees[i].encoding());
  }
  return set;
}

Polytope::Polytope(PointSet points, std::vector<std::size_t> vertices)
    : points_(std::move(points)), vertices_(std::move(vertices)) {
  std::sort(vertices_.begin(), vertices_.end());
  for (auto v : vertices_) {
    if (v >= points_.size()) throw DomainError("vertex index out of range");
  }
}

std::vector<RationalVector> Polytope::vertex_points() const {
  std::vector<RationalVector> out;
  out.reserve(vertices_.size());
  for (auto v : vertices_) out.push_back(points_[v]);
  return out;
}

bool Polytope::is_vertex_point(std::size_t i) const { return has_vertex(points_[i]); }

bool Polytope::has_vertex(const RationalVector& point) const {
  return std::any_of(vertices_.begin(), vertices_.end(), [&](std::size_t v) { return points_[v] == point; });
}

std::vector<std::string> Polytope::vertex_provenance(std::size_t v) const {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < points_.size(); ++i) {
    if (points_[i] == points_[v]) out.push_back(points_.provenance()[i]);
  }
  return out;
}

Membership convex_membership(const std::vector<RationalVector>& generators, const RationalVector& point) {
  const std::size_t dim = point.size();
  LinearProgram lp(generators.size());
  for (std::size_t d = 0; d < dim; ++d) {
    RationalVector row(generators.size());
    for (std::size_t j = 0; j < generators.size(); ++j) {
      if (generators[j].size() != dim) throw DomainError("generator dimension mismatch");
      row[j] = generators[j][d];
    }
    lp.add_constraint(std::move(row), Sense::Equal, point[d]);
  }
  lp.add_constraint(RationalVector(generators.size(), 1), Sense::Equal, 1);

  Membership result;
  if (generators.empty()) return result;
  LpResult solved = solve(lp);
  result.inside = solved.status == LpStatus::Optimal;
  if (result.inside) {
    result.weights = std::move(solved.x);
  } else {
    result.certificate = std::move(solved.farkas);
  }
  return result;
}

Polytope certify_vertices(const PointSet& points) {
  if (points.empty()) return Polytope(points, {});

  std::map<RationalVector, std::size_t> first_seen;
  std::vector<std::size_t> distinct;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (first_seen.emplace(points[i], i).second) distinct.push_back(i);
  }

  std::vector<char> is_vertex(distinct.size(), 0);
  parallel_for(distinct.size(), [&](std::size_t u) {
    std::vector<RationalVector> others;
    others.reserve(distinct.size() - 1);
    for (std::size_t w = 0; w < distinct.size(); ++w) {
      if (w != u) others.push_back(points[distinct[w]]);
    }
    is_vertex[u] = others.empty() || !convex_membership(others, points[distinct[u]]).inside;
  });

  std::vector<std::size_t> vertices;
  for (std::size_t u = 0; u < distinct.size(); ++u) {
    if (is_vertex[u]) vertices.push_back(distinct[u]);
  }
  return Polytope(points, std::move(vertices));
}

Containment contains_polytope(const Polytope& inner, const Polytope& outer) {
  if (inner.dimension() != outer.dimension()) throw DomainError("polytopes live in different dimensions");
  const auto generators = outer.vertex_points();
  Containment result;
  for (auto v : inner.vertices()) {
    if (!convex_membership(generators, inner.points()[v]).inside) {
      result.contained = false;
      result.witness = v;
      return result;
    }
  }
  return result;
}

Polytope face_restrict(const Polytope& poly, std::size_t coordinate) {
  if (coordinate >= poly.dimension()) throw DomainError("face coordinate out of range");
  PointSet face(poly.dimension());
  const auto& pts = poly.points();
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (pts[i][coordinate] == 0) face.add(pts[i], pts.provenance()[i]);
  }
  return certify_vertices(face);
}

Polytope sampling_polytope(int n, int m) { return certify_vertices(PointSet::from_density(density_matrix(n, m))); }

RationalVector project_drop_last(const RationalVector& point) {
  if (point.empty()) throw DomainError("cannot project an empty point");
  return RationalVector(point.begin(), point.end() - 1);
}

std::vector<std::size_t> boundary_cycle_2d(const Polytope& poly) {
  if (poly.dimension() != 3) throw DomainError("boundary_cycle_2d needs points in three shape coordinates");
  std::vector<std::size_t> order = poly.vertices();
  if (order.size() <= 2) return order;

  std::vector<RationalVector> flat;
  for (auto v : order) flat.push_back(project_drop_last(poly.points()[v]));
  Rational cx = 0;
  Rational cy = 0;
  for (const auto& p : flat) {
    cx += p[0];
    cy += p[1];
  }
  cx /= static_cast<long>(flat.size());
  cy /= static_cast<long>(flat.size());

  // Exact angular order around the centroid: half-plane, then cross product.
  auto half = [&](const RationalVector& p) {
    const Rational dx = p[0] - cx;
    const Rational dy = p[1] - cy;
    return (dy < 0 || (dy == 0 && dx < 0)) ? 1 : 0;
  };
  std::vector<std::size_t> idx(order.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    const int ha = half(flat[a]);
    const int hb = half(flat[b]);
    if (ha != hb) return ha < hb;
    const Rational cross = (flat[a][0] - cx) * (flat[b][1] - cy) - (flat[a][1] - cy) * (flat[b][0] - cx);
    return cross > 0;
  });

  // Rotate so the lexicographically smallest projected vertex comes first.
  std::size_t start = 0;
  for (std::size_t k = 1; k < idx.size(); ++k) {
    if (flat[idx[k]] < flat[idx[start]]) start = k;
  }
  std::vector<std::size_t> cycle;
  cycle.reserve(idx.size());
  for (std::size_t k = 0; k < idx.size(); ++k) cycle.push_back(order[idx[(start + k) % idx.size()]]);
  return cycle;
}

std::string polytope_to_json(const Polytope& poly) {
  nlohmann::ordered_json j;
  j["dim"] = poly.dimension();
  auto& pts = j["points"] = nlohmann::ordered_json::array();
  for (const auto& p : poly.points().points()) {
    auto row = nlohmann::ordered_json::array();
    for (const auto& v : p) row.push_back(to_string(v));
    pts.push_back(std::move(row));
  }
  j["vertices"] = poly.vertices();
  j["provenance"] = poly.points().provenance();
  return j.dump(2);
}

}  // namespace treepoly
