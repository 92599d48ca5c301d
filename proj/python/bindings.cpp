// Python bindings. Exact values cross the boundary as fractions.Fraction;
// rational inputs accept Fraction, int or "p/q" text.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "treepoly/density.hpp"
#include "treepoly/experiments.hpp"
#include "treepoly/geometry.hpp"
#include "treepoly/models.hpp"
#include "treepoly/shape.hpp"

namespace py = pybind11;
using namespace treepoly;

namespace {

py::object to_fraction(const Rational& value) {
  // Leaked on purpose: a static py::object would be released after the
  // interpreter shuts down.
  static const auto* fraction = new py::object(py::module_::import("fractions").attr("Fraction"));
  return (*fraction)(to_string(value));
}

Rational from_python(const py::handle& value) { return parse_rational(py::str(value).cast<std::string>()); }

py::list to_list(const RationalVector& values) {
  py::list out;
  for (const auto& v : values) out.append(to_fraction(v));
  return out;
}

// Ordered {encoding: Fraction} over RB_U(n).
py::dict to_dict(const ShapeDistribution& d) {
  py::dict out;
  for (std::size_t i = 0; i < d.size(); ++i) out[py::str(d.index()[i].encoding())] = to_fraction(d[i]);
  return out;
}

ShapeDistribution from_dict(int n, const py::dict& probs) {
  const auto index = enumerate_shapes(n);
  RationalVector values(index->size(), 0);
  for (const auto& [key, value] : probs) {
    values[index->index_of(parse_shape(py::str(key).cast<std::string>()))] = from_python(value);
  }
  return ShapeDistribution(n, std::move(values));
}

py::dict polytope_dict(const Polytope& p) {
  py::list points;
  for (const auto& pt : p.points().points()) points.append(to_list(pt));
  py::list vertices;
  for (auto v : p.vertices()) vertices.append(v);
  py::dict out;
  out["dim"] = p.dimension();
  out["points"] = points;
  out["provenance"] = p.points().provenance();
  out["vertices"] = vertices;
  return out;
}

py::dict report_dict(const VerificationReport& r) {
  py::dict out;
  out["claim"] = r.claim;
  out["status"] = status_name(r.status);
  out["witnesses"] = r.witnesses;
  out["detail"] = r.detail;
  out["seconds"] = r.seconds;
  return out;
}

}  // namespace

PYBIND11_MODULE(_treepoly, m) {
  m.doc() = "Exact tree-shape densities, models and sampling polytopes";

  m.def("canonical", [](const std::string& text) { return parse_shape(text).encoding(); },
        "Canonical encoding of a shape");
  m.def("shape_name", [](const std::string& text) { return shape_name(parse_shape(text)); });
  m.def("shapes", [](int n) {
    std::vector<std::string> out;
    for (const auto& s : *enumerate_shapes(n)) out.push_back(s.encoding());
    return out;
  }, "RB_U(n) in canonical order");
  m.def("shape_count", [](int n) { return py::int_(py::str(to_string(shape_count(n)))); });
  m.def("labeling_count", [](const std::string& text) {
    return py::int_(py::str(to_string(labeling_count(parse_shape(text)))));
  });
  m.def("count_pattern", [](const std::string& tree, const std::string& pattern) {
    return py::int_(py::str(to_string(count_pattern(parse_shape(tree), parse_shape(pattern)))));
  });

  m.def("density_row", [](const std::string& tree, int n) { return to_dict(density_row(parse_shape(tree), n)); });
  m.def("marginalize", [](int n_from, const py::dict& probs, int n) {
    return to_dict(marginalize(from_dict(n_from, probs), n));
  });

  m.def("beta_distribution", [](int n, const std::string& beta) {
    return to_dict(beta_distribution(n, BetaParam::parse(beta)));
  }, py::arg("n"), py::arg("beta"));
  m.def("beta_rule", [](int n, const std::string& beta) { return to_list(beta_rule(n, BetaParam::parse(beta)).values()); });
  m.def("derive_lower_rule", [](const py::list& q) {
    RationalVector values;
    for (const auto& v : q) values.push_back(from_python(v));
    const int n = static_cast<int>(values.size()) + 1;
    return to_list(derive_lower_rule(SplittingRule(n, std::move(values))).values());
  });
  m.def("multinomial_distribution", [](const std::string& skeleton, const py::list& weights, int n) {
    RationalVector t;
    for (const auto& w : weights) t.push_back(from_python(w));
    return to_dict(multinomial_distribution(MultinomialParams(parse_shape(skeleton), std::move(t)), n));
  }, py::arg("skeleton"), py::arg("weights"), py::arg("n"));

  m.def("sampling_polytope", [](int n, int m) { return polytope_dict(sampling_polytope(n, m)); },
        "Points of EX_n^m with certified vertex indices");
  m.def("in_convex_hull", [](const std::vector<py::list>& generators, const py::list& point) {
    std::vector<RationalVector> gens;
    for (const auto& g : generators) {
      RationalVector v;
      for (const auto& x : g) v.push_back(from_python(x));
      gens.push_back(std::move(v));
    }
    RationalVector x;
    for (const auto& v : point) x.push_back(from_python(v));
    return convex_membership(gens, x).inside;
  });

  m.def("claim_ids", &claim_ids);
  m.def("verify", [](const std::string& claim) {
    VerificationReport r;
    {
      py::gil_scoped_release release;
      r = run_claim(claim);
    }
    return report_dict(r);
  });
}
