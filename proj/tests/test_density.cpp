#include <doctest.h>

#include <sstream>

#include "test_support.hpp"
#include "treepoly/config.hpp"
#include "treepoly/density.hpp"

using namespace treepoly;

TEST_CASE("five-leaf example projects to (2/5, 3/5)") {
  const ShapeDistribution d = density_row(parse_shape("((*,*),((*,*),*))"), 4);
  CHECK(d.probs() == RationalVector{Rational(2, 5), Rational(3, 5)});
  CHECK(d.at(build_comb(4)) == Rational(2, 5));
}

TEST_CASE("density at the tree's own size is a point mass") {
  gen::Rng rng(3);
  for (int i = 0; i < 20; ++i) {
    const TreeShape t = gen::shape(rng, gen::uniform(rng, 1, 9));
    CHECK(density_row(t, t.leaf_count()) == ShapeDistribution::point_mass(t));
  }
  CHECK_THROWS_AS(density_row(build_comb(3), 4), DomainError);
  CHECK_THROWS_AS(density_row(build_comb(3), 0), DomainError);
}

TEST_CASE("density rows agree with oracle counts") {
  gen::Rng rng(17);
  for (int iter = 0; iter < 40; ++iter) {
    const int m = gen::uniform(rng, 5, 11);
    const int n = gen::uniform(rng, 2, 5);
    const TreeShape t = gen::shape(rng, m);
    const ShapeDistribution d = density_row(t, n);
    for (std::size_t i = 0; i < d.size(); ++i) {
      const auto c = oracle::count_pattern(t.encoding(), d.index()[i].encoding());
      CHECK(d[i] == Rational(BigInt(c), binomial(m, n)));
    }
  }
}

TEST_CASE("property: tower rule for densities") {
  gen::Rng rng(41);
  for (int iter = 0; iter < 40; ++iter) {
    const int m = gen::uniform(rng, 6, 18);
    const int k = gen::uniform(rng, 3, m - 1);
    const int n = gen::uniform(rng, 2, k - 1);
    const TreeShape t = gen::shape(rng, m);
    CAPTURE(t.encoding());
    CHECK(marginalize(density_row(t, k), n) == density_row(t, n));
  }
}

TEST_CASE("marginalizing a point mass gives the density row") {
  const TreeShape t = build_max_balanced(9);
  CHECK(marginalize(ShapeDistribution::point_mass(t), 5) == density_row(t, 5));
  CHECK_THROWS_AS(marginalize(ShapeDistribution::point_mass(t), 10), DomainError);
}

TEST_CASE("distribution validation") {
  CHECK_THROWS_AS(ShapeDistribution(4, {Rational(1)}), DomainError);
  CHECK_THROWS_AS(ShapeDistribution(4, {Rational(1, 2), Rational(1, 3)}), DomainError);
  CHECK_THROWS_AS(ShapeDistribution(4, {Rational(3, 2), Rational(-1, 2)}), DomainError);
  CHECK_NOTHROW(ShapeDistribution(4, {Rational(1, 2), Rational(1, 2)}));
}

TEST_CASE("density matrix of RB_U(5) onto four leaves") {
  const DensityMatrix dm = density_matrix(4, 5);
  REQUIRE(dm.columns.size() == 3);
  CHECK(dm.column(build_comb(5)).probs() == RationalVector{1, 0});
  CHECK(dm.column(parse_shape("(*,((*,*),(*,*)))")).probs() == RationalVector{Rational(4, 5), Rational(1, 5)});
  CHECK(dm.column(parse_shape("((*,*),(*,(*,*)))")).probs() == RationalVector{Rational(2, 5), Rational(3, 5)});
  CHECK_THROWS_AS(density_matrix(5, 4), DomainError);
}

TEST_CASE("density matrix is identical across thread counts") {
  const unsigned saved = thread_count();
  set_thread_count(1);
  const DensityMatrix one = density_matrix(5, 10);
  set_thread_count(4);
  const DensityMatrix four = density_matrix(5, 10);
  set_thread_count(saved);
  CHECK(one.trees == four.trees);
  CHECK(one.columns == four.columns);
}

TEST_CASE("column cap raises a resource error") {
  const Caps saved = caps();
  set_caps(Caps{10, saved.max_scan});
  CHECK_THROWS_AS(density_matrix(4, 8), ResourceLimitError);
  set_caps(saved);
}

TEST_CASE("caps parse from text") {
  const Caps c = parse_caps("max_columns=5, max_scan=7");
  CHECK(c.max_columns == 5);
  CHECK(c.max_scan == 7);
  CHECK_THROWS_AS(parse_caps("bogus=1"), std::invalid_argument);
  CHECK_THROWS_AS(parse_caps("max_scan=x"), std::invalid_argument);
}

TEST_CASE("CSV export quotes encodings") {
  std::ostringstream out;
  write_density_csv(density_matrix(4, 5), out);
  CHECK(out.str() ==
        "tree,\"(*,(*,(*,*)))\",\"((*,*),(*,*))\"\n"
        "\"(*,(*,(*,(*,*))))\",1,0\n"
        "\"(*,((*,*),(*,*)))\",4/5,1/5\n"
        "\"((*,*),(*,(*,*)))\",2/5,3/5\n");
  CHECK(csv_field("plain") == "plain");
  CHECK(csv_field("a\"b") == "\"a\"\"b\"");
}

TEST_CASE("distribution JSON round-trip") {
  const ShapeDistribution d = density_row(build_complete(3), 5);
  CHECK(distribution_from_json(distribution_to_json(d)) == d);
  CHECK_THROWS_AS(distribution_from_json("{\"n\": 4}"), DomainError);
  CHECK_THROWS_AS(distribution_from_json("not json"), DomainError);
  CHECK_THROWS_AS(distribution_from_json("{\"n\": 4, \"probs\": [\"1/2\", \"1/3\"]}"), DomainError);
}

TEST_CASE("density matrix JSON lists rows and columns") {
  const std::string j = density_to_json(density_matrix(4, 5));
  CHECK(j.find("\"rows\"") != std::string::npos);
  CHECK(j.find("\"3/5\"") != std::string::npos);
}
