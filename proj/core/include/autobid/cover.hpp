#pragma once

#include "autobid/gadgets.hpp"

#include <cstddef>
#include <optional>
#include <vector>

namespace autobid {

/// Clauses are disjunctions of literals z_{var,label}.
struct CoverCSP {
  struct Literal {
    std::size_t var;
    std::size_t label;
    bool operator==(const Literal&) const = default;
  };

  std::size_t variables = 0;
  std::size_t alphabet = 0;
  std::vector<std::vector<Literal>> clauses;

  void validate() const;
};

/// Clauses with at least one literal whose variable carries its label.
std::size_t cover_value(const CoverCSP& csp, const std::vector<std::optional<std::size_t>>& assignment);

/// Exhaustive optimum over all total assignments.
std::size_t best_cover_value(const CoverCSP& csp);

/// q variables choose sets from `family`; one clause per universe element,
/// listing every (variable, set) pair whose set contains the element.
CoverCSP max_cover_encoding(std::size_t q, std::size_t universe, const std::vector<std::vector<std::size_t>>& family);

struct LearningParams {
  Rational epsilon;
  Rational delta;
  Rational M;
  Rational K;
  Rational eta;
  Rational lambda;
  Rational beta;
  Rational mu{0};
  Rational alpha{0};
  /// Surplus level with (1 + s) = (1+eps)/(1-mu) at c = 1.
  Rational s{0};
  Objective objective = Objective::revenue;
};

/// M = 2/delta, lambda = 2d/delta, K = lambda M (|Sigma|-1)/eps,
/// eta = delta |C| / (d (|Sigma| M + K)), beta = eta M.
LearningParams revenue_learning_params(const Rational& epsilon, const Rational& delta, const CoverCSP& csp);

/// mu = eps^2, M = 1/eps, alpha = eps, lambda = 2d/eps, K = lambda M (|Sigma|-1)/eps,
/// eta = eps |C| / (d (|Sigma| M + K)), beta = min(eps^2, eta M).
LearningParams welfare_learning_params(const Rational& epsilon, const CoverCSP& csp);

/// Assignment gadget per variable "x<i>", clause bidder/item "clause:c<j>"
/// (1+eps versus 1/M for literal bidders), incumbents in welfare mode.
CompiledInstance compile_cover(const CoverCSP& csp, const LearningParams& params);

}  // namespace autobid
