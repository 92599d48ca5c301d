// Parametric families of exchangeable, sampling consistent distributions:
// Markov branching models, the beta-splitting family and the multinomial
// model on a skeleton tree.

#ifndef TREEPOLY_MODELS_HPP
#define TREEPOLY_MODELS_HPP

#include <string>
#include <string_view>
#include <vector>

#include "treepoly/density.hpp"
#include "treepoly/rational.hpp"
#include "treepoly/shape.hpp"

namespace treepoly {

/// Split distribution q_n on {1, ..., n-1}: probability that i leaves go
/// to the left of the root split. Symmetric and normalized.
class SplittingRule {
 public:
  /// `q[i-1]` holds q_n(i). Throws DomainError when q is not a symmetric
  /// probability vector of length n-1.
  SplittingRule(int n, RationalVector q);

  int level() const noexcept { return n_; }
  const RationalVector& values() const noexcept { return q_; }
  /// q_n(i) for 1 <= i <= n-1.
  const Rational& operator()(int i) const;

  friend bool operator==(const SplittingRule&, const SplittingRule&) = default;

 private:
  int n_;
  RationalVector q_;
};

/// Beta parameter: an exact rational beta > -2, or one of the endpoints
/// beta = -2 (all mass on the comb) and beta = infinity.
class BetaParam {
 public:
  enum class Kind { Finite, CombLimit, Infinity };

  static BetaParam finite(const Rational& beta);
  static BetaParam comb_limit() { return BetaParam(Kind::CombLimit, -2); }
  static BetaParam infinity() { return BetaParam(Kind::Infinity, 0); }
  /// Accepts `p/q`, decimals, `-2` (comb endpoint) and `inf`/`infinity`.
  static BetaParam parse(std::string_view text);

  Kind kind() const noexcept { return kind_; }
  /// Only meaningful for Kind::Finite.
  const Rational& value() const noexcept { return value_; }
  std::string to_string() const;

 private:
  BetaParam(Kind kind, Rational value) : kind_(kind), value_(std::move(value)) {}
  Kind kind_;
  Rational value_;
};

/// q_n(i) of the beta-splitting model, exact.
Rational beta_q(int n, int i, const BetaParam& beta);
SplittingRule beta_rule(int n, const BetaParam& beta);
/// Beta-splitting distribution on RB_U(n).
ShapeDistribution beta_distribution(int n, const BetaParam& beta);

/// Shape distribution of the Markov branching model. `rules` must hold one
/// rule per level 2..n, in order.
ShapeDistribution markov_branching_distribution(const std::vector<SplittingRule>& rules);

/// q_{n-1} from q_n through the sampling consistency recurrence
///   q_{n-1}(i) = ((n-i) q_n(i) + (i+1) q_n(i+1)) / (n - 2 q_n(1)).
SplittingRule derive_lower_rule(const SplittingRule& rule);

/// Skeleton tree plus edge weights of its extended tree (an extra leaf
/// above the root). Edge 0 is the root pendant edge; the remaining 2m-2
/// edges follow a preorder walk of the canonical skeleton, left child
/// first, each node contributing the edge to its parent.
class MultinomialParams {
 public:
  /// Throws DomainError unless weights has 2m-1 non-negative entries
  /// summing to exactly one.
  MultinomialParams(TreeShape skeleton, RationalVector weights);

  const TreeShape& skeleton() const noexcept { return skeleton_; }
  const RationalVector& weights() const noexcept { return weights_; }
  std::size_t edge_count() const noexcept { return weights_.size(); }

 private:
  TreeShape skeleton_;
  RationalVector weights_;
};

/// Number of edges of the extended skeleton, 2m-1.
int extended_edge_count(const TreeShape& skeleton);
/// For each extended edge, whether its lower endpoint is a skeleton leaf.
std::vector<bool> leaf_edges(const TreeShape& skeleton);

/// T_A: attach one pendant leaf per occurrence of an edge in `edges`
/// (repeats form a chain along the edge) and keep only the new leaves.
TreeShape multinomial_build(const TreeShape& skeleton, const std::vector<int>& edges);
/// Same, from a multiplicity vector indexed by edge.
TreeShape multinomial_build_counts(const TreeShape& skeleton, const std::vector<int>& counts);

/// Full distribution p_{T,t} on RB_U(n).
ShapeDistribution multinomial_distribution(const MultinomialParams& params, int n);
Rational multinomial_prob(const MultinomialParams& params, const TreeShape& shape, int n);

/// Weights 1/m on the m leaf edges of T and 0 elsewhere.
MultinomialParams dm_construction(const TreeShape& tree);

std::string splitting_rule_to_json(const SplittingRule& rule);
/// Reads {"n": int, "q": ["p/q", ...]}.
SplittingRule splitting_rule_from_json(const std::string& text);
std::string multinomial_params_to_json(const MultinomialParams& params);
/// Reads {"skeleton": "<shape>", "weights": ["p/q", ...]}.
MultinomialParams multinomial_params_from_json(const std::string& text);

}  // namespace treepoly

#endif  // TREEPOLY_MODELS_HPP
