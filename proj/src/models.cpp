#include "treepoly/models.hpp"

#include <cctype>
#include <functional>
#include <map>
#include <optional>

#include <json.hpp>

namespace treepoly {

// ---------------------------------------------------------------------------
// SplittingRule / BetaParam

SplittingRule::SplittingRule(int n, RationalVector q) : n_(n), q_(std::move(q)) {
  if (n < 2) throw DomainError("splitting rules start at level 2");
  if (q_.size() != static_cast<std::size_t>(n - 1)) {
    throw DomainError("rule at level " + std::to_string(n) + " needs " + std::to_string(n - 1) + " entries");
  }
  Rational total = 0;
  for (std::size_t i = 0; i < q_.size(); ++i) {
    if (q_[i] < 0) throw DomainError("negative split probability");
    if (q_[i] != q_[q_.size() - 1 - i]) throw DomainError("split rule is not symmetric");
    total += q_[i];
  }
  if (total != 1) throw DomainError("split rule sums to " + treepoly::to_string(total) + ", not 1");
}

const Rational& SplittingRule::operator()(int i) const {
  if (i < 1 || i >= n_) throw DomainError("split size out of range");
  return q_[static_cast<std::size_t>(i - 1)];
}

BetaParam BetaParam::finite(const Rational& beta) {
  if (beta <= -2) throw DomainError("finite beta must exceed -2, got " + treepoly::to_string(beta));
  return BetaParam(Kind::Finite, beta);
}

BetaParam BetaParam::parse(std::string_view text) {
  std::string t(text);
  for (auto& c : t) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (t == "inf" || t == "+inf" || t == "infinity" || t == "oo") return infinity();
  const Rational value = parse_rational(t);
  if (value == -2) return comb_limit();
  return finite(value);
}

std::string BetaParam::to_string() const {
  switch (kind_) {
    case Kind::CombLimit: return "-2";
    case Kind::Infinity: return "inf";
    case Kind::Finite: break;
  }
  return treepoly::to_string(value_);
}

// ---------------------------------------------------------------------------
// Beta splitting

namespace {

// Dense polynomial in beta, coefficients low to high.
struct Polynomial {
  RationalVector c;

  static Polynomial constant(const Rational& v) { return Polynomial{{v}}; }
  // a + b*beta
  static Polynomial linear(const Rational& a, const Rational& b) { return Polynomial{{a, b}}; }

  int degree() const {
    for (int d = static_cast<int>(c.size()) - 1; d >= 0; --d) {
      if (c[d] != 0) return d;
    }
    return -1;
  }

  Rational operator()(const Rational& x) const {
    Rational acc = 0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * x + *it;
    return acc;
  }

  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    Polynomial r{RationalVector(a.c.size() + b.c.size() - 1, 0)};
    for (std::size_t i = 0; i < a.c.size(); ++i) {
      for (std::size_t j = 0; j < b.c.size(); ++j) r.c[i + j] += a.c[i] * b.c[j];
    }
    return r;
  }

  friend Polynomial operator-(const Polynomial& a, const Polynomial& b) {
    Polynomial r{RationalVector(std::max(a.c.size(), b.c.size()), 0)};
    for (std::size_t i = 0; i < a.c.size(); ++i) r.c[i] += a.c[i];
    for (std::size_t i = 0; i < b.c.size(); ++i) r.c[i] -= b.c[i];
    return r;
  }

  // Exact quotient by (beta - root); the caller guarantees root is a zero.
  Polynomial deflate(const Rational& root) const {
    const int d = degree();
    Polynomial q{RationalVector(static_cast<std::size_t>(std::max(d, 1)), 0)};
    Rational carry = 0;
    for (int k = d; k >= 1; --k) {
      carry = c[k] + carry * root;
      q.c[static_cast<std::size_t>(k - 1)] = carry;
    }
    return q;
  }
};

// Falling factorial (x)_k with x = a + b*beta.
Polynomial falling(const Rational& a, const Rational& b, int k) {
  Polynomial p = Polynomial::constant(1);
  for (int j = 0; j < k; ++j) p = p * Polynomial::linear(a - j, b);
  return p;
}

}  // namespace

Rational beta_q(int n, int i, const BetaParam& beta) {
  if (n < 2 || i < 1 || i > n - 1) {
    throw DomainError("beta_q needs 1 <= i <= n-1, got n = " + std::to_string(n) + ", i = " + std::to_string(i));
  }
  if (beta.kind() == BetaParam::Kind::CombLimit) {
    if (n == 2) return 1;
    return (i == 1 || i == n - 1) ? Rational(1, 2) : Rational(0);
  }

  const Polynomial num = Polynomial::constant(Rational(binomial(n, i))) * falling(i, 1, i) * falling(n - i, 1, n - i);
  const Polynomial den = falling(n + 1, 2, n) - Polynomial::constant(2) * falling(n, 1, n);

  if (beta.kind() == BetaParam::Kind::Infinity) {
    const int dn = num.degree();
    const int dd = den.degree();
    if (dd < dn) throw DomainError("beta_q diverges as beta -> infinity");
    if (dn < dd) return 0;
    return num.c[dn] / den.c[dd];
  }

  // Cancel common factors (beta - b) so removable singularities such as
  // beta = -1 evaluate to the limit of the rational function.
  const Rational& b = beta.value();
  Polynomial p = num;
  Polynomial q = den;
  while (p.degree() > 0 && q.degree() > 0 && p(b) == 0 && q(b) == 0) {
    p = p.deflate(b);
    q = q.deflate(b);
  }
  const Rational d = q(b);
  if (d == 0) throw DomainError("beta_q denominator vanishes at beta = " + treepoly::to_string(b));
  return p(b) / d;
}

SplittingRule beta_rule(int n, const BetaParam& beta) {
  RationalVector q;
  q.reserve(static_cast<std::size_t>(n - 1));
  for (int i = 1; i < n; ++i) q.push_back(beta_q(n, i, beta));
  return SplittingRule(n, std::move(q));
}

ShapeDistribution beta_distribution(int n, const BetaParam& beta) {
  if (n < 1) throw DomainError("beta_distribution needs n >= 1");
  std::vector<SplittingRule> rules;
  for (int k = 2; k <= n; ++k) rules.push_back(beta_rule(k, beta));
  if (n == 1) return ShapeDistribution::point_mass(TreeShape::leaf());
  return markov_branching_distribution(rules);
}

ShapeDistribution markov_branching_distribution(const std::vector<SplittingRule>& rules) {
  if (rules.empty()) throw DomainError("need at least the level-2 splitting rule");
  for (std::size_t j = 0; j < rules.size(); ++j) {
    if (rules[j].level() != static_cast<int>(j) + 2) {
      throw DomainError("missing splitting rule for level " + std::to_string(j + 2));
    }
  }
  const int n = static_cast<int>(rules.size()) + 1;

  std::unordered_map<std::string, Rational> prob;
  prob.emplace(TreeShape::leaf().encoding(), 1);
  for (int k = 2; k <= n; ++k) {
    const SplittingRule& q = rules[static_cast<std::size_t>(k - 2)];
    for (const auto& t : *enumerate_shapes(k)) {
      const TreeShape& a = t.left();
      const TreeShape& b = t.right();
      const int i = a.leaf_count();
      const Rational factor = (2 * i == k && a == b) ? Rational(1) : Rational(2);
      prob.emplace(t.encoding(), factor * q(i) * prob.at(a.encoding()) * prob.at(b.encoding()));
    }
  }

  const auto index = enumerate_shapes(n);
  RationalVector out;
  out.reserve(index->size());
  for (const auto& t : *index) out.push_back(prob.at(t.encoding()));
  return ShapeDistribution(n, std::move(out));
}

SplittingRule derive_lower_rule(const SplittingRule& rule) {
  const int n = rule.level();
  if (n < 3) throw DomainError("derive_lower_rule needs a rule at level >= 3");
  const Rational denom = Rational(n) - 2 * rule(1);
  if (denom == 0) throw DomainError("n - 2 q_n(1) vanishes");
  RationalVector lower;
  lower.reserve(static_cast<std::size_t>(n - 2));
  for (int i = 1; i <= n - 2; ++i) lower.push_back(((n - i) * rule(i) + (i + 1) * rule(i + 1)) / denom);
  return SplittingRule(n - 1, std::move(lower));
}

// ---------------------------------------------------------------------------
// Multinomial model

MultinomialParams::MultinomialParams(TreeShape skeleton, RationalVector weights)
    : skeleton_(std::move(skeleton)), weights_(std::move(weights)) {
  const auto expected = static_cast<std::size_t>(extended_edge_count(skeleton_));
  if (weights_.size() != expected) {
    throw DomainError("skeleton with " + std::to_string(skeleton_.leaf_count()) + " leaves needs " +
                      std::to_string(expected) + " edge weights, got " + std::to_string(weights_.size()));
  }
  Rational total = 0;
  for (const auto& w : weights_) {
    if (w < 0) throw DomainError("negative edge weight");
    total += w;
  }
  if (total != 1) throw DomainError("edge weights sum to " + to_string(total) + ", not 1");
}

int extended_edge_count(const TreeShape& skeleton) { return 2 * skeleton.leaf_count() - 1; }

std::vector<bool> leaf_edges(const TreeShape& skeleton) {
  std::vector<bool> result;
  result.reserve(static_cast<std::size_t>(extended_edge_count(skeleton)));
  result.push_back(skeleton.is_leaf());
  auto walk = [&](auto&& self, const TreeShape& t) -> void {
    if (t.is_leaf()) return;
    for (const TreeShape* child : {&t.left(), &t.right()}) {
      result.push_back(child->is_leaf());
      self(self, *child);
    }
  };
  walk(walk, skeleton);
  return result;
}

namespace {

std::optional<TreeShape> chain(int k, std::optional<TreeShape> below) {
  for (int j = 0; j < k; ++j) below = below ? TreeShape::join(TreeShape::leaf(), *below) : TreeShape::leaf();
  return below;
}

// New-leaf shape strictly below node t; `next` is the next preorder edge id.
std::optional<TreeShape> attach_below(const TreeShape& t, const std::vector<int>& counts, std::size_t& next) {
  if (t.is_leaf()) return std::nullopt;
  std::optional<TreeShape> parts[2];
  int slot = 0;
  for (const TreeShape* child : {&t.left(), &t.right()}) {
    const std::size_t edge = next++;
    auto inner = attach_below(*child, counts, next);
    parts[slot++] = chain(counts[edge], std::move(inner));
  }
  if (!parts[0]) return parts[1];
  if (!parts[1]) return parts[0];
  return TreeShape::join(*parts[0], *parts[1]);
}

}  // namespace

TreeShape multinomial_build_counts(const TreeShape& skeleton, const std::vector<int>& counts) {
  if (counts.size() != static_cast<std::size_t>(extended_edge_count(skeleton))) {
    throw DomainError("multiplicity vector must have one entry per extended edge");
  }
  int total = 0;
  for (int c : counts) {
    if (c < 0) throw DomainError("negative edge multiplicity");
    total += c;
  }
  if (total == 0) throw DomainError("empty edge multiset");
  std::size_t next = 1;
  auto below = attach_below(skeleton, counts, next);
  return *chain(counts[0], std::move(below));
}

TreeShape multinomial_build(const TreeShape& skeleton, const std::vector<int>& edges) {
  if (edges.empty()) throw DomainError("empty edge multiset");
  const int edge_total = extended_edge_count(skeleton);
  std::vector<int> counts(static_cast<std::size_t>(edge_total), 0);
  for (int e : edges) {
    if (e < 0 || e >= edge_total) {
      throw DomainError("edge index " + std::to_string(e) + " out of range [0, " + std::to_string(edge_total) + ")");
    }
    ++counts[static_cast<std::size_t>(e)];
  }
  return multinomial_build_counts(skeleton, counts);
}

ShapeDistribution multinomial_distribution(const MultinomialParams& params, int n) {
  if (n < 1) throw DomainError("multinomial sample size must be >= 1");
  const auto index = enumerate_shapes(n);
  const auto& w = params.weights();

  std::vector<std::size_t> support;
  for (std::size_t e = 0; e < w.size(); ++e) {
    if (w[e] != 0) support.push_back(e);
  }

  // Powers t_e^k for k = 0..n.
  std::vector<RationalVector> powers(support.size());
  for (std::size_t s = 0; s < support.size(); ++s) {
    powers[s].resize(static_cast<std::size_t>(n) + 1);
    powers[s][0] = 1;
    for (int k = 1; k <= n; ++k) powers[s][k] = powers[s][k - 1] * w[support[s]];
  }
  std::vector<BigInt> fact(static_cast<std::size_t>(n) + 1);
  for (int k = 0; k <= n; ++k) fact[k] = factorial(k);

  RationalVector out(index->size(), 0);
  std::vector<int> counts(w.size(), 0);
  auto recurse = [&](auto&& self, std::size_t s, int remaining, const Rational& mass, const BigInt& denom) -> void {
    if (s + 1 == support.size()) {
      counts[support[s]] = remaining;
      const Rational p = mass * powers[s][remaining] * Rational(fact[n], denom * fact[remaining]);
      out[*index->find(multinomial_build_counts(params.skeleton(), counts))] += p;
      counts[support[s]] = 0;
      return;
    }
    for (int k = 0; k <= remaining; ++k) {
      counts[support[s]] = k;
      self(self, s + 1, remaining - k, mass * powers[s][k], denom * fact[k]);
    }
    counts[support[s]] = 0;
  };
  recurse(recurse, 0, n, Rational(1), BigInt(1));
  return ShapeDistribution(n, std::move(out));
}

Rational multinomial_prob(const MultinomialParams& params, const TreeShape& shape, int n) {
  if (shape.leaf_count() != n) return 0;
  return multinomial_distribution(params, n).at(shape);
}

MultinomialParams dm_construction(const TreeShape& tree) {
  const int m = tree.leaf_count();
  if (m < 2) throw DomainError("dm_construction needs a skeleton with at least 2 leaves");
  const auto leaves = leaf_edges(tree);
  RationalVector weights(leaves.size(), 0);
  for (std::size_t e = 0; e < leaves.size(); ++e) {
    if (leaves[e]) weights[e] = Rational(1, m);
  }
  return MultinomialParams(tree, std::move(weights));
}

// ---------------------------------------------------------------------------
// Parameter files

std::string splitting_rule_to_json(const SplittingRule& rule) {
  nlohmann::ordered_json j;
  j["n"] = rule.level();
  auto& q = j["q"] = nlohmann::ordered_json::array();
  for (const auto& v : rule.values()) q.push_back(to_string(v));
  return j.dump(2);
}

SplittingRule splitting_rule_from_json(const std::string& text) {
  try {
    const auto j = nlohmann::json::parse(text);
    RationalVector q;
    for (const auto& v : j.at("q")) q.push_back(parse_rational(v.get<std::string>()));
    return SplittingRule(j.at("n").get<int>(), std::move(q));
  } catch (const nlohmann::json::exception& e) {
    throw DomainError(std::string("malformed splitting rule JSON: ") + e.what());
  }
}

std::string multinomial_params_to_json(const MultinomialParams& params) {
  nlohmann::ordered_json j;
  j["skeleton"] = params.skeleton().encoding();
  auto& w = j["weights"] = nlohmann::ordered_json::array();
  for (const auto& v : params.weights()) w.push_back(to_string(v));
  return j.dump(2);
}

MultinomialParams multinomial_params_from_json(const std::string& text) {
  try {
    const auto j = nlohmann::json::parse(text);
    RationalVector w;
    for (const auto& v : j.at("weights")) w.push_back(parse_rational(v.get<std::string>()));
    return MultinomialParams(parse_shape(j.at("skeleton").get<std::string>()), std::move(w));
  } catch (const nlohmann::json::exception& e) {
    throw DomainError(std::string("malformed multinomial JSON: ") + e.what());
  }
}

}  // namespace treepoly
