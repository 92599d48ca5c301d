// Exact two-phase simplex over rationals with Bland's anti-cycling rule.
//
// Problems have the form
//     maximize c.x  subject to  a_i.x (<=|=|>=) b_i,  x >= 0.
// Every pivot is exact. An infeasible problem comes back with a Farkas
// certificate y (one multiplier per constraint) satisfying
//     y.A >= 0 componentwise,   y_i >= 0 on <= rows,   y_i <= 0 on >= rows,
//     y.b < 0,
// which check_farkas() verifies independently of the solver.

#ifndef TREEPOLY_LP_HPP
#define TREEPOLY_LP_HPP

#include <cstddef>
#include <vector>

#include "treepoly/rational.hpp"

namespace treepoly {

enum class Sense { LessEq, Equal, GreaterEq };
enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LinearConstraint {
  RationalVector coeffs;
  Sense sense = Sense::Equal;
  Rational rhs;
};

class LinearProgram {
 public:
  explicit LinearProgram(std::size_t variables);

  /// Throws DomainError when coeffs has the wrong length.
  void add_constraint(RationalVector coeffs, Sense sense, Rational rhs);
  /// Maximization objective; all-zero (pure feasibility) by default.
  void set_objective(RationalVector objective);

  std::size_t variables() const noexcept { return variables_; }
  const std::vector<LinearConstraint>& constraints() const noexcept { return constraints_; }
  const RationalVector& objective() const noexcept { return objective_; }

 private:
  std::size_t variables_;
  std::vector<LinearConstraint> constraints_;
  RationalVector objective_;
};

struct LpResult {
  LpStatus status = LpStatus::Infeasible;
  /// Optimal point (original variables only) when status is Optimal.
  RationalVector x;
  Rational objective;
  /// Farkas multipliers, one per constraint, when status is Infeasible.
  RationalVector farkas;
  std::size_t pivots = 0;
};

LpResult solve(const LinearProgram& lp);

/// True when x satisfies every constraint and x >= 0.
bool check_feasible(const LinearProgram& lp, const RationalVector& x);
/// True when y certifies infeasibility as described above.
bool check_farkas(const LinearProgram& lp, const RationalVector& y);

}  // namespace treepoly

#endif  // TREEPOLY_LP_HPP
