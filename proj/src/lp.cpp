#include "treepoly/lp.hpp"

#include <optional>

#include "treepoly/shape.hpp"

namespace treepoly {

LinearProgram::LinearProgram(std::size_t variables) : variables_(variables), objective_(variables, 0) {}

void LinearProgram::add_constraint(RationalVector coeffs, Sense sense, Rational rhs) {
  if (coeffs.size() != variables_) throw DomainError("constraint length does not match the variable count");
  constraints_.push_back({std::move(coeffs), sense, std::move(rhs)});
}

void LinearProgram::set_objective(RationalVector objective) {
  if (objective.size() != variables_) throw DomainError("objective length does not match the variable count");
  objective_ = std::move(objective);
}

namespace {

// Dense tableau in standard form: columns are original variables, then
// one slack per inequality, then one artificial per row; the last column
// is the right-hand side.
class Tableau {
 public:
  explicit Tableau(const LinearProgram& lp) : lp_(lp) {
    const auto& rows = lp.constraints();
    rows_ = rows.size();
    structural_ = lp.variables();
    slack_of_.assign(rows_, -1);
    std::size_t slacks = 0;
    for (std::size_t i = 0; i < rows_; ++i) {
      if (rows[i].sense != Sense::Equal) slack_of_[i] = static_cast<long>(structural_ + slacks++);
    }
    standard_ = structural_ + slacks;
    cols_ = standard_ + rows_;
    rhs_col_ = cols_;

    table_.assign(rows_, RationalVector(cols_ + 1, 0));
    sign_.assign(rows_, 1);
    basis_.resize(rows_);
    active_.assign(rows_, true);
    for (std::size_t i = 0; i < rows_; ++i) {
      auto& row = table_[i];
      for (std::size_t j = 0; j < structural_; ++j) row[j] = rows[i].coeffs[j];
      if (slack_of_[i] >= 0) row[static_cast<std::size_t>(slack_of_[i])] = rows[i].sense == Sense::LessEq ? 1 : -1;
      row[rhs_col_] = rows[i].rhs;
      if (row[rhs_col_] < 0) {
        sign_[i] = -1;
        for (auto& v : row) v = -v;
      }
      row[standard_ + i] = 1;
      basis_[i] = standard_ + i;
    }
  }

  LpResult run() {
    LpResult result;

    // Phase 1: minimize the sum of artificials.
    RationalVector cost(cols_, 0);
    for (std::size_t i = 0; i < rows_; ++i) cost[standard_ + i] = 1;
    price(cost);
    iterate(/*allow_artificial=*/false, result.pivots);

    if (objective_value_ != 0) {
      // Duals of the phase-1 optimum: pi_i = cost - reduced cost on the
      // artificial column of row i. The certificate is -pi mapped back
      // through the row sign flips.
      result.status = LpStatus::Infeasible;
      result.farkas.assign(rows_, 0);
      for (std::size_t i = 0; i < rows_; ++i) {
        const Rational pi = Rational(1) - reduced_[standard_ + i];
        result.farkas[i] = -pi * sign_[i];
      }
      return result;
    }

    drive_out_artificials(result.pivots);

    // Phase 2: minimize -c.x over the original columns.
    RationalVector cost2(cols_, 0);
    for (std::size_t j = 0; j < structural_; ++j) cost2[j] = -lp_.objective()[j];
    price(cost2);
    if (!iterate(/*allow_artificial=*/false, result.pivots)) {
      result.status = LpStatus::Unbounded;
      return result;
    }

    result.status = LpStatus::Optimal;
    result.x.assign(structural_, 0);
    for (std::size_t i = 0; i < rows_; ++i) {
      if (active_[i] && basis_[i] < structural_) result.x[basis_[i]] = table_[i][rhs_col_];
    }
    result.objective = 0;
    for (std::size_t j = 0; j < structural_; ++j) result.objective += lp_.objective()[j] * result.x[j];
    return result;
  }

 private:
  // Recomputes reduced costs and objective for the given column costs.
  void price(const RationalVector& cost) {
    cost_ = cost;
    reduced_ = cost;
    objective_value_ = 0;
    for (std::size_t i = 0; i < rows_; ++i) {
      if (!active_[i]) continue;
      const Rational& cb = cost_[basis_[i]];
      if (cb == 0) continue;
      for (std::size_t j = 0; j < cols_; ++j) reduced_[j] -= cb * table_[i][j];
      objective_value_ += cb * table_[i][rhs_col_];
    }
  }

  bool is_artificial(std::size_t j) const { return j >= standard_; }

  void pivot(std::size_t r, std::size_t c) {
    auto& prow = table_[r];
    const Rational inv = Rational(1) / prow[c];
    for (auto& v : prow) v *= inv;
    for (std::size_t i = 0; i < rows_; ++i) {
      if (i == r || !active_[i]) continue;
      const Rational f = table_[i][c];
      if (f == 0) continue;
      for (std::size_t j = 0; j <= cols_; ++j) {
        if (prow[j] != 0) table_[i][j] -= f * prow[j];
      }
    }
    const Rational f = reduced_[c];
    if (f != 0) {
      for (std::size_t j = 0; j < cols_; ++j) {
        if (prow[j] != 0) reduced_[j] -= f * prow[j];
      }
      objective_value_ += f * prow[rhs_col_];
    }
    basis_[r] = c;
  }

  // Bland's rule. Returns false when the objective is unbounded below.
  bool iterate(bool allow_artificial, std::size_t& pivots) {
    for (;;) {
      std::optional<std::size_t> entering;
      for (std::size_t j = 0; j < cols_; ++j) {
        if (!allow_artificial && is_artificial(j)) continue;
        if (reduced_[j] < 0) {
          entering = j;
          break;
        }
      }
      if (!entering) return true;

      std::optional<std::size_t> leaving;
      Rational best_ratio;
      for (std::size_t i = 0; i < rows_; ++i) {
        if (!active_[i]) continue;
        const Rational& a = table_[i][*entering];
        if (a <= 0) continue;
        const Rational ratio = table_[i][rhs_col_] / a;
        if (!leaving || ratio < best_ratio || (ratio == best_ratio && basis_[i] < basis_[*leaving])) {
          leaving = i;
          best_ratio = ratio;
        }
      }
      if (!leaving) return false;
      pivot(*leaving, *entering);
      ++pivots;
    }
  }

  void drive_out_artificials(std::size_t& pivots) {
    for (std::size_t i = 0; i < rows_; ++i) {
      if (!active_[i] || !is_artificial(basis_[i])) continue;
      std::optional<std::size_t> column;
      for (std::size_t j = 0; j < standard_; ++j) {
        if (table_[i][j] != 0) {
          column = j;
          break;
        }
      }
      if (column) {
        pivot(i, *column);
        ++pivots;
      } else {
        active_[i] = false;  // redundant row
      }
    }
  }

  const LinearProgram& lp_;
  std::size_t rows_ = 0;
  std::size_t structural_ = 0;
  std::size_t standard_ = 0;
  std::size_t cols_ = 0;
  std::size_t rhs_col_ = 0;
  std::vector<long> slack_of_;
  std::vector<RationalVector> table_;
  std::vector<int> sign_;
  std::vector<std::size_t> basis_;
  std::vector<bool> active_;
  RationalVector cost_;
  RationalVector reduced_;
  Rational objective_value_;
};

}  // namespace

LpResult solve(const LinearProgram& lp) { return Tableau(lp).run(); }

bool check_feasible(const LinearProgram& lp, const RationalVector& x) {
  if (x.size() != lp.variables()) return false;
  for (const auto& v : x) {
    if (v < 0) return false;
  }
  for (const auto& c : lp.constraints()) {
    Rational lhs = 0;
    for (std::size_t j = 0; j < x.size(); ++j) lhs += c.coeffs[j] * x[j];
    switch (c.sense) {
      case Sense::LessEq:
        if (lhs > c.rhs) return false;
        break;
      case Sense::Equal:
        if (lhs != c.rhs) return false;
        break;
      case Sense::GreaterEq:
        if (lhs < c.rhs) return false;
        break;
    }
  }
  return true;
}

bool check_farkas(const LinearProgram& lp, const RationalVector& y) {
  const auto& rows = lp.constraints();
  if (y.size() != rows.size()) return false;
  Rational yb = 0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].sense == Sense::LessEq && y[i] < 0) return false;
    if (rows[i].sense == Sense::GreaterEq && y[i] > 0) return false;
    yb += y[i] * rows[i].rhs;
  }
  if (yb >= 0) return false;
  for (std::size_t j = 0; j < lp.variables(); ++j) {
    Rational col = 0;
    for (std::size_t i = 0; i < rows.size(); ++i) col += y[i] * rows[i].coeffs[j];
    if (col < 0) return false;
  }
  return true;
}

}  // namespace treepoly
