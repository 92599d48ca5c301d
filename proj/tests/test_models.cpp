#include <doctest.h>

#include <cmath>
#include <functional>

#include "test_support.hpp"
#include "treepoly/density.hpp"
#include "treepoly/models.hpp"

using namespace treepoly;

namespace {

// Falling factorial x (x-1) ... (x-k+1).
Rational falling(const Rational& x, int k) {
  Rational r = 1;
  for (int j = 0; j < k; ++j) r *= x - j;
  return r;
}

// Direct evaluation of the beta split law at a finite beta where the
// normalizer does not vanish.
Rational beta_q_direct(int n, int i, const Rational& b) {
  const Rational num = Rational(binomial(n, i)) * falling(i + b, i) * falling(n - i + b, n - i);
  const Rational den = falling(n + 2 * b + 1, n) - 2 * falling(n + b, n);
  return num / den;
}

std::vector<SplittingRule> rules_up_to(int n, const BetaParam& beta) {
  std::vector<SplittingRule> rules;
  for (int k = 2; k <= n; ++k) rules.push_back(beta_rule(k, beta));
  return rules;
}

// Extended skeleton with new leaves hung on edges, restricted to the new
// leaves. Edge ids follow a preorder walk of the encoding.
oracle::Tree hang(const oracle::Tree& node, const std::vector<int>& counts, std::size_t& next) {
  const std::size_t edge = next++;
  oracle::Tree sub;
  if (!node->kids.empty()) {
    oracle::Tree a = hang(node->kids[0], counts, next);
    oracle::Tree b = hang(node->kids[1], counts, next);
    sub = a && b ? oracle::join(a, b) : (a ? a : b);
  }
  for (int k = 0; k < counts[edge]; ++k) sub = sub ? oracle::join(oracle::leaf(), sub) : oracle::leaf();
  return sub;
}

// Sums prod t_e over every ordered sequence of n edges.
std::map<std::string, Rational> multinomial_oracle(const TreeShape& skeleton, const RationalVector& t, int n) {
  const oracle::Tree tree = oracle::read(skeleton.encoding());
  std::map<std::string, Rational> out;
  std::vector<int> counts(t.size(), 0);
  std::function<void(int, Rational)> rec = [&](int left, Rational weight) {
    if (weight == 0) return;
    if (left == 0) {
      std::size_t next = 0;
      out[oracle::canon(hang(tree, counts, next))] += weight;
      return;
    }
    for (std::size_t e = 0; e < t.size(); ++e) {
      ++counts[e];
      rec(left - 1, weight * t[e]);
      --counts[e];
    }
  };
  rec(n, 1);
  return out;
}

}  // namespace

TEST_CASE("beta split law on four leaves") {
  for (const Rational b : {Rational(-3, 2), Rational(-1), Rational(0), Rational(1), Rational(7, 3)}) {
    CAPTURE(to_string(b));
    const BetaParam beta = BetaParam::finite(b);
    CHECK(2 * beta_q(4, 1, beta) == (12 + 4 * b) / (18 + 7 * b));
    CHECK(beta_q(4, 2, beta) == (6 + 3 * b) / (18 + 7 * b));
    const ShapeDistribution d = beta_distribution(4, beta);
    CHECK(d[0] == (12 + 4 * b) / (18 + 7 * b));
    CHECK(d[1] == (6 + 3 * b) / (18 + 7 * b));
  }
  CHECK(beta_q(4, 2, BetaParam::infinity()) == Rational(3, 7));
}

TEST_CASE("beta split law matches direct evaluation") {
  for (const Rational b : {Rational(-3, 2), Rational(0), Rational(1, 2), Rational(2), Rational(11)}) {
    for (int n = 2; n <= 10; ++n) {
      for (int i = 1; i < n; ++i) {
        CAPTURE(n);
        CAPTURE(i);
        CHECK(beta_q(n, i, BetaParam::finite(b)) == beta_q_direct(n, i, b));
      }
    }
  }
}

TEST_CASE("beta split law at the special parameters") {
  for (int n = 3; n <= 12; ++n) {
    Rational harmonic = 0;
    for (int j = 1; j < n; ++j) harmonic += Rational(1, j * (n - j));
    for (int i = 1; i < n; ++i) {
      CAPTURE(n);
      CAPTURE(i);
      // beta = -1: proportional to 1 / (i (n - i)).
      CHECK(beta_q(n, i, BetaParam::finite(-1)) == Rational(1, i * (n - i)) / harmonic);
      // beta = 0: uniform splits.
      CHECK(beta_q(n, i, BetaParam::finite(0)) == Rational(1, n - 1));
      // beta = infinity: binomial splits conditioned on both sides nonempty.
      CHECK(beta_q(n, i, BetaParam::infinity()) == Rational(binomial(n, i)) / Rational(pow2(n) - 2));
      // beta = -2: the comb.
      CHECK(beta_q(n, i, BetaParam::comb_limit()) == (i == 1 || i == n - 1 ? Rational(1, 2) : Rational(0)));
    }
  }
  CHECK(beta_q(2, 1, BetaParam::comb_limit()) == 1);
}

TEST_CASE("beta parameter parsing") {
  CHECK(BetaParam::parse("inf").kind() == BetaParam::Kind::Infinity);
  CHECK(BetaParam::parse("Infinity").kind() == BetaParam::Kind::Infinity);
  CHECK(BetaParam::parse("-2").kind() == BetaParam::Kind::CombLimit);
  CHECK(BetaParam::parse("-4/2").kind() == BetaParam::Kind::CombLimit);
  CHECK(BetaParam::parse("1/2").value() == Rational(1, 2));
  CHECK(BetaParam::parse("0.5").value() == Rational(1, 2));
  CHECK_THROWS_AS(BetaParam::parse("-3"), DomainError);
  CHECK_THROWS_AS(BetaParam::parse("x"), std::invalid_argument);
  CHECK(BetaParam::parse("-1/2").to_string() == "-1/2");
}

TEST_CASE("beta endpoints give the comb and the (4/21, 1/7, 2/3) point") {
  CHECK(beta_distribution(5, BetaParam::comb_limit()) == ShapeDistribution::point_mass(build_comb(5)));
  CHECK(beta_distribution(5, BetaParam::infinity()).probs() ==
        RationalVector{Rational(4, 21), Rational(1, 7), Rational(2, 3)});
  CHECK(beta_distribution(4, BetaParam::finite(0)).probs() == RationalVector{Rational(2, 3), Rational(1, 3)});
}

TEST_CASE("beta model is sampling consistent") {
  for (const auto& beta : {BetaParam::finite(Rational(-3, 2)), BetaParam::finite(-1), BetaParam::finite(0),
                           BetaParam::finite(5), BetaParam::infinity(), BetaParam::comb_limit()}) {
    for (int n = 5; n <= 9; ++n) {
      CAPTURE(n);
      CHECK(marginalize(beta_distribution(n, beta), n - 1) == beta_distribution(n - 1, beta));
      CHECK(marginalize(beta_distribution(n, beta), 4) == beta_distribution(4, beta));
    }
  }
}

TEST_CASE("lower rule recurrence maps beta rules down one level") {
  for (const auto& beta : {BetaParam::finite(-1), BetaParam::finite(0), BetaParam::finite(Rational(3, 2)),
                           BetaParam::finite(10), BetaParam::infinity()}) {
    for (int n = 4; n <= 10; ++n) {
      CAPTURE(n);
      CHECK(derive_lower_rule(beta_rule(n, beta)) == beta_rule(n - 1, beta));
    }
  }
}

TEST_CASE("uniform splits are a fixed point of the recurrence") {
  for (int n = 4; n <= 10; ++n) {
    const SplittingRule lower = derive_lower_rule(SplittingRule(n, RationalVector(n - 1, Rational(1, n - 1))));
    CHECK(lower == SplittingRule(n - 1, RationalVector(n - 2, Rational(1, n - 2))));
  }
}

TEST_CASE("property: Markov branching with derived rules is sampling consistent") {
  gen::Rng rng(31);
  for (int iter = 0; iter < 25; ++iter) {
    const int n = gen::uniform(rng, 4, 9);
    // Random symmetric q_n: draw half, mirror it.
    const int half = n / 2;
    RationalVector raw(static_cast<std::size_t>(n - 1));
    for (int i = 1; i <= half; ++i) {
      const Rational v(gen::uniform(rng, 0, 6));
      raw[static_cast<std::size_t>(i - 1)] = v;
      raw[static_cast<std::size_t>(n - 1 - i)] = v;
    }
    Rational total = 0;
    for (const auto& v : raw) total += v;
    if (total == 0) continue;
    for (auto& v : raw) v /= total;

    std::vector<SplittingRule> rules = {SplittingRule(n, raw)};
    while (rules.front().level() > 2) rules.insert(rules.begin(), derive_lower_rule(rules.front()));
    const ShapeDistribution top = markov_branching_distribution(rules);
    const std::vector<SplittingRule> lower_rules(rules.begin(), rules.end() - 1);
    CHECK(marginalize(top, n - 1) == markov_branching_distribution(lower_rules));
  }
}

TEST_CASE("Markov branching rejects missing levels") {
  std::vector<SplittingRule> rules = {beta_rule(2, BetaParam::finite(0)), beta_rule(4, BetaParam::finite(0))};
  CHECK_THROWS_AS(markov_branching_distribution(rules), DomainError);
}

TEST_CASE("splitting rule validation") {
  CHECK_THROWS_AS(SplittingRule(4, {Rational(1, 2), Rational(1, 2)}), DomainError);
  CHECK_THROWS_AS(SplittingRule(4, {Rational(1, 2), Rational(0), Rational(1, 3)}), DomainError);
  CHECK_THROWS_AS(SplittingRule(3, {Rational(2), Rational(-1)}), DomainError);
  CHECK_THROWS_AS(SplittingRule(4, {Rational(1, 4), Rational(1, 4), Rational(1, 4)}), DomainError);
}

TEST_CASE("Yule simulation agrees with the beta = 0 distribution") {
  // Uniform splits on six leaves, 20000 draws, every shape within 3 sigma.
  const int n = 6;
  const int draws = 20000;
  gen::Rng rng(123456);
  std::function<TreeShape(int)> grow = [&](int k) {
    if (k == 1) return TreeShape::leaf();
    const int i = gen::uniform(rng, 1, k - 1);
    return TreeShape::join(grow(i), grow(k - i));
  };
  const auto index = enumerate_shapes(n);
  std::vector<int> tally(index->size(), 0);
  for (int d = 0; d < draws; ++d) ++tally[index->index_of(grow(n))];

  const ShapeDistribution exact = beta_distribution(n, BetaParam::finite(0));
  for (std::size_t i = 0; i < index->size(); ++i) {
    const double p = exact[i].convert_to<double>();
    const double sigma = std::sqrt(p * (1 - p) / draws);
    CAPTURE((*index)[i].encoding());
    CHECK(std::abs(tally[i] / double(draws) - p) <= 3 * sigma);
  }
}

TEST_CASE("multinomial model on the tripod") {
  // Skeleton (*,*): edge 0 is the root pendant edge, 1 and 2 the leaves.
  const TreeShape cherry = build_comb(2);
  const TreeShape bal5 = (*enumerate_shapes(5))[2];
  gen::Rng rng(8);
  for (int s = 0; s < 5; ++s) {
    const RationalVector t = gen::simplex_point(rng, 3, 10);
    const MultinomialParams params(cherry, t);
    const Rational expected = 10 * pow(t[1], 3) * pow(t[2], 2) + 10 * pow(t[1], 2) * pow(t[2], 3);
    CHECK(multinomial_prob(params, bal5, 5) == expected);
  }
  CHECK(multinomial_build(cherry, {1, 1, 1, 2, 2}) == bal5);
  CHECK(multinomial_build(cherry, {0, 1, 1, 2, 2}) != bal5);
}

TEST_CASE("multinomial model matches the sequence oracle") {
  gen::Rng rng(64);
  for (int iter = 0; iter < 12; ++iter) {
    const int m = gen::uniform(rng, 2, 4);
    const int n = gen::uniform(rng, 2, 5);
    const TreeShape skeleton = gen::shape(rng, m);
    const RationalVector t = gen::simplex_point(rng, static_cast<std::size_t>(2 * m - 1), 7);
    const ShapeDistribution d = multinomial_distribution(MultinomialParams(skeleton, t), n);
    const auto expected = multinomial_oracle(skeleton, t, n);
    CAPTURE(skeleton.encoding());
    CAPTURE(n);
    for (std::size_t i = 0; i < d.size(); ++i) {
      const auto it = expected.find(oracle::canon(d.index()[i]));
      CHECK(d[i] == (it == expected.end() ? Rational(0) : it->second));
    }
  }
}

TEST_CASE("multinomial normalization for small skeletons") {
  gen::Rng rng(90);
  for (int m = 2; m <= 4; ++m) {
    for (const auto& skeleton : *enumerate_shapes(m)) {
      for (int n = 2; n <= 6; ++n) {
        const RationalVector t = gen::simplex_point(rng, static_cast<std::size_t>(2 * m - 1), 9);
        const ShapeDistribution d = multinomial_distribution(MultinomialParams(skeleton, t), n);
        Rational total = 0;
        for (const auto& p : d.probs()) total += p;
        CHECK(total == 1);
      }
    }
  }
}

TEST_CASE("property: multinomial model is sampling consistent") {
  gen::Rng rng(72);
  for (int iter = 0; iter < 10; ++iter) {
    const int m = gen::uniform(rng, 2, 4);
    const int n = gen::uniform(rng, 4, 7);
    const TreeShape skeleton = gen::shape(rng, m);
    const MultinomialParams params(skeleton, gen::simplex_point(rng, static_cast<std::size_t>(2 * m - 1), 8));
    CHECK(marginalize(multinomial_distribution(params, n), n - 1) == multinomial_distribution(params, n - 1));
  }
}

TEST_CASE("multinomial edge layout") {
  const TreeShape comb3 = build_comb(3);  // (*,(*,*))
  CHECK(extended_edge_count(comb3) == 5);
  CHECK(leaf_edges(comb3) == std::vector<bool>{false, true, false, true, true});
  CHECK(multinomial_build_counts(comb3, {0, 1, 0, 1, 1}) == comb3);
  CHECK(multinomial_build_counts(comb3, {2, 0, 0, 0, 0}) == build_comb(2));
  CHECK(multinomial_build(comb3, {3, 3, 4, 4}) == build_complete(2));
  CHECK_THROWS_AS(multinomial_build(comb3, {5}), DomainError);
  CHECK_THROWS_AS(MultinomialParams(comb3, RationalVector(4, Rational(1, 4))), DomainError);
  CHECK_THROWS_AS(MultinomialParams(comb3, {Rational(2), Rational(-1), 0, 0, 0}), DomainError);
}

TEST_CASE("leaf-edge construction at m = n") {
  // The density side is a point mass, so the gap is 1 - p(T).
  for (const auto& tree : {build_complete(2), build_comb(4), build_max_balanced(5)}) {
    const int n = tree.leaf_count();
    const MultinomialParams d = dm_construction(tree);
    const ShapeDistribution model = multinomial_distribution(d, n);
    const ShapeDistribution dens = density_row(tree, n);
    Rational delta = 0;
    for (std::size_t i = 0; i < model.size(); ++i) delta = std::max(delta, Rational(abs(dens[i] - model[i])));
    CHECK(delta == 1 - model.at(tree));
  }
  // Bal_4 with weights 1/4 on its leaves: all distinct leaves (4!/4^4) give
  // Bal_4 back; a repeated leaf turns into a cherry chain.
  const ShapeDistribution bal = multinomial_distribution(dm_construction(build_complete(2)), 4);
  CHECK(bal.at(build_complete(2)) > Rational(24, 256));
}

TEST_CASE("model JSON round-trips") {
  const SplittingRule rule = beta_rule(6, BetaParam::finite(Rational(1, 3)));
  CHECK(splitting_rule_from_json(splitting_rule_to_json(rule)) == rule);
  const MultinomialParams params(build_comb(3), {Rational(1, 5), Rational(1, 5), Rational(1, 5), Rational(1, 5), Rational(1, 5)});
  const MultinomialParams back = multinomial_params_from_json(multinomial_params_to_json(params));
  CHECK(back.skeleton() == params.skeleton());
  CHECK(back.weights() == params.weights());
  CHECK_THROWS_AS(splitting_rule_from_json("{}"), DomainError);
  CHECK_THROWS_AS(multinomial_params_from_json("[1]"), DomainError);
}
