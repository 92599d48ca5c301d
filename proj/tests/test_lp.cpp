#include <doctest.h>

#include <optional>

#include "test_support.hpp"
#include "treepoly/lp.hpp"
#include "treepoly/shape.hpp"

using namespace treepoly;

namespace {

// Solves a square system exactly; nullopt when singular.
std::optional<RationalVector> solve_square(std::vector<RationalVector> a, RationalVector b) {
  const std::size_t n = b.size();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && a[p][c] == 0) ++p;
    if (p == n) return std::nullopt;
    std::swap(a[p], a[c]);
    std::swap(b[p], b[c]);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c || a[r][c] == 0) continue;
      const Rational f = a[r][c] / a[c][c];
      for (std::size_t k = c; k < n; ++k) a[r][k] -= f * a[c][k];
      b[r] -= f * b[c];
    }
  }
  RationalVector x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = b[i] / a[i][i];
  return x;
}

// Best objective over all basic feasible points, found by intersecting
// every choice of `vars` hyperplanes among the constraints and x_j = 0.
std::optional<Rational> brute_force_best(const LinearProgram& lp) {
  const std::size_t vars = lp.variables();
  std::vector<RationalVector> planes;
  RationalVector rhs;
  for (const auto& c : lp.constraints()) {
    planes.push_back(c.coeffs);
    rhs.push_back(c.rhs);
  }
  for (std::size_t j = 0; j < vars; ++j) {
    RationalVector e(vars, 0);
    e[j] = 1;
    planes.push_back(e);
    rhs.push_back(0);
  }
  std::optional<Rational> best;
  std::vector<bool> pick(planes.size(), false);
  std::fill(pick.begin(), pick.begin() + static_cast<long>(vars), true);
  do {
    std::vector<RationalVector> a;
    RationalVector b;
    for (std::size_t i = 0; i < planes.size(); ++i) {
      if (pick[i]) {
        a.push_back(planes[i]);
        b.push_back(rhs[i]);
      }
    }
    const auto x = solve_square(a, b);
    if (!x || !check_feasible(lp, *x)) continue;
    Rational value = 0;
    for (std::size_t j = 0; j < vars; ++j) value += lp.objective()[j] * (*x)[j];
    if (!best || value > *best) best = value;
  } while (std::prev_permutation(pick.begin(), pick.end()));
  return best;
}

}  // namespace

TEST_CASE("bounded single variable") {
  LinearProgram lp(1);
  lp.add_constraint({1}, Sense::LessEq, 1);
  lp.set_objective({1});
  const LpResult r = solve(lp);
  REQUIRE(r.status == LpStatus::Optimal);
  CHECK(r.x == RationalVector{1});
  CHECK(r.objective == 1);
}

TEST_CASE("infeasible system yields a verified Farkas certificate") {
  LinearProgram lp(1);
  lp.add_constraint({1}, Sense::GreaterEq, 2);
  lp.add_constraint({1}, Sense::LessEq, 1);
  const LpResult r = solve(lp);
  REQUIRE(r.status == LpStatus::Infeasible);
  CHECK(check_farkas(lp, r.farkas));
  CHECK_FALSE(check_farkas(lp, RationalVector{0, 0}));
}

TEST_CASE("unbounded objective is flagged") {
  LinearProgram lp(2);
  lp.add_constraint({1, -1}, Sense::LessEq, 1);
  lp.set_objective({1, 1});
  CHECK(solve(lp).status == LpStatus::Unbounded);
}

TEST_CASE("redundant equalities and negative right-hand sides") {
  LinearProgram lp(2);
  lp.add_constraint({1, 1}, Sense::Equal, 1);
  lp.add_constraint({2, 2}, Sense::Equal, 2);
  lp.add_constraint({-1, 0}, Sense::LessEq, Rational(-1, 3));
  lp.set_objective({0, 1});
  const LpResult r = solve(lp);
  REQUIRE(r.status == LpStatus::Optimal);
  CHECK(r.x == RationalVector{Rational(1, 3), Rational(2, 3)});
  CHECK(check_feasible(lp, r.x));
}

TEST_CASE("degenerate cycling example terminates") {
  // Beale's example; cycles under the largest-coefficient rule.
  LinearProgram lp(4);
  lp.add_constraint({Rational(1, 4), -8, -1, 9}, Sense::LessEq, 0);
  lp.add_constraint({Rational(1, 2), -12, Rational(-1, 2), 3}, Sense::LessEq, 0);
  lp.add_constraint({0, 0, 1, 0}, Sense::LessEq, 1);
  lp.set_objective({Rational(3, 4), -20, Rational(1, 2), -6});
  const LpResult r = solve(lp);
  REQUIRE(r.status == LpStatus::Optimal);
  CHECK(r.objective == Rational(5, 4));
}

TEST_CASE("constraint length is validated") {
  LinearProgram lp(2);
  CHECK_THROWS_AS(lp.add_constraint({1}, Sense::LessEq, 1), DomainError);
  CHECK_THROWS_AS(lp.set_objective({1, 2, 3}), DomainError);
}

TEST_CASE("property: random LPs agree with vertex enumeration") {
  gen::Rng rng(555);
  int optimal = 0;
  int infeasible = 0;
  for (int iter = 0; iter < 300; ++iter) {
    const std::size_t vars = static_cast<std::size_t>(gen::uniform(rng, 1, 3));
    const int rows = gen::uniform(rng, 1, 4);
    LinearProgram lp(vars);
    for (int i = 0; i < rows; ++i) {
      RationalVector a(vars);
      for (auto& v : a) v = gen::uniform(rng, -3, 3);
      const Sense sense = static_cast<Sense>(gen::uniform(rng, 0, 2));
      lp.add_constraint(a, sense, gen::uniform(rng, -4, 6));
    }
    // A box keeps every feasible problem bounded.
    for (std::size_t j = 0; j < vars; ++j) {
      RationalVector e(vars, 0);
      e[j] = 1;
      lp.add_constraint(e, Sense::LessEq, 5);
    }
    RationalVector c(vars);
    for (auto& v : c) v = gen::uniform(rng, -3, 3);
    lp.set_objective(c);

    const LpResult r = solve(lp);
    const auto best = brute_force_best(lp);
    if (r.status == LpStatus::Optimal) {
      ++optimal;
      CHECK(check_feasible(lp, r.x));
      REQUIRE(best);
      CHECK(r.objective == *best);
    } else {
      REQUIRE(r.status == LpStatus::Infeasible);
      ++infeasible;
      CHECK_FALSE(best);
      CHECK(check_farkas(lp, r.farkas));
    }
  }
  CHECK(optimal > 50);
  CHECK(infeasible > 20);
}
