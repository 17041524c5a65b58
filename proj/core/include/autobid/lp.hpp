#pragma once

#include "autobid/rational.hpp"

#include <cstddef>
#include <utility>
#include <vector>

namespace autobid {

/// Exact linear program over nonnegative variables:
///   maximize c.x subject to rows, x >= 0.
/// Without an objective the solver only decides feasibility.
class LinearProgram {
 public:
  enum class Sense { le, eq, ge };

  struct Term {
    std::size_t var;
    Rational coeff;
  };

  struct Row {
    std::vector<Term> terms;
    Sense sense;
    Rational rhs;
  };

  explicit LinearProgram(std::size_t num_vars = 0) : objective_(num_vars) {}

  std::size_t add_var();
  std::size_t num_vars() const { return objective_.size(); }

  void add_row(std::vector<Term> terms, Sense sense, Rational rhs);
  void set_objective(std::size_t var, Rational coeff);

  const std::vector<Row>& rows() const { return rows_; }
  const std::vector<Rational>& objective() const { return objective_; }

 private:
  std::vector<Row> rows_;
  std::vector<Rational> objective_;
};

struct LpResult {
  enum class Status { optimal, infeasible, unbounded };
  Status status = Status::infeasible;
  std::vector<Rational> x;
  Rational objective{0};

  bool feasible() const { return status != Status::infeasible; }
};

/// Two-phase dense simplex with Bland's rule, exact arithmetic.
LpResult solve(const LinearProgram& lp);

}  // namespace autobid
