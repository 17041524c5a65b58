#pragma once

#include "autobid/auction.hpp"
#include "autobid/equilibrium.hpp"
#include "autobid/gadgets.hpp"
#include "autobid/model.hpp"

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace autobid {

/// sup{m : [1, m] pacing dominated} for bidder i: the smallest
/// max(max_{i' != i} v_i'j, r_j) / v_ij over items with v_ij > 0 that are not
/// winnable at multiplier 1 against all-cap opponents, capped at cap.
Rational domination_sup(const Instance& instance, std::size_t bidder);

/// max(1, (1 - mu) * domination_sup).
Rational m_safe(const Instance& instance, std::size_t bidder, const Rational& mu);

std::vector<Rational> m_safe_all(const Instance& instance, const Rational& mu);

/// Continuous rule outputs are rounded up to this grid.
inline const Rational kRuleQuantum{1, 1 << 20};

struct UpdateRule {
  enum class Kind { step, poly, exp, custom };

  Kind kind = Kind::step;
  /// Degree d for poly, rate eta for exp, claimed constant c for custom.
  Rational param{1};
  Rational m_safe{1};
  Rational cap{1};
  std::function<Rational(const Extended&)> custom;

  /// psi(r); always within [m_safe, cap] and nondecreasing in r.
  Rational operator()(const Extended& r) const;

  /// Constant c with psi(1+s) >= min(cap, (1+cs) m_safe).
  Rational constant() const;

  static UpdateRule step(const Rational& m_safe, const Rational& cap);
  static UpdateRule poly(unsigned degree, const Rational& m_safe, const Rational& cap);
  static UpdateRule exp(const Rational& rate, const Rational& m_safe, const Rational& cap);
};

std::string rule_kind_name(UpdateRule::Kind kind);
/// Throws ParameterError for unknown names.
UpdateRule::Kind parse_rule_kind(const std::string& name);

/// Same kind and parameter for every bidder, each with its own m_safe.
std::vector<UpdateRule> uniform_rules(const Instance& instance, UpdateRule::Kind kind, const Rational& param,
                                      const Rational& mu);

struct RoundRecord {
  Profile m;
  Outcome outcome;
  std::vector<Rational> value;  ///< per bidder, this round
  std::vector<Rational> spend;  ///< per bidder, this round, at unit prices
};

struct SequenceTrace {
  AllocationPolicy policy = AllocationPolicy::equal_split;
  std::vector<RoundRecord> rounds;
  /// Running sums after each round.
  std::vector<std::vector<Rational>> cum_value;
  std::vector<std::vector<Rational>> cum_spend;

  std::size_t T() const { return rounds.size(); }
  /// Cumulative value / spend of `bidder` after round t (0-based).
  Extended ratio(std::size_t t, std::size_t bidder) const;
};

/// Replays a multiplier sequence through allocate().
SequenceTrace make_trace(const Instance& instance, const std::vector<Profile>& profiles,
                         AllocationPolicy policy = AllocationPolicy::equal_split);

/// m^{(t+1)}_i = rules[i](r^{(t)}_i). The initial profile defaults to the
/// rules' m_safe values.
SequenceTrace run_dynamics(const Instance& instance, const std::vector<UpdateRule>& rules, std::size_t T,
                           std::optional<Profile> initial = std::nullopt,
                           AllocationPolicy policy = AllocationPolicy::equal_split);

struct AdmissibleVerdict {
  bool accepted = false;
  std::optional<Condition> violated;
  std::optional<std::size_t> round;  ///< 0-based round of a per-round violation
  /// Per bidder: (tau * total spend - total value) / T.
  std::vector<Rational> deficit;
  /// max(0, max deficit): the smallest beta the trace is admissible at.
  Rational required_beta;
  std::string detail;
};

/// Per-round highest bid, second price and full allocation exactly, plus the
/// time-average RoS condition with additive slack beta.
AdmissibleVerdict check_admissible(const Instance& instance, const SequenceTrace& trace, const Rational& beta);

struct ResponsiveParams {
  Rational alpha{0};
  Rational beta{0};
  Rational mu{0};
  Rational c{1};
  std::vector<Rational> s_grid;
};

/// {1/100, 1/20, 1/10, 1/4, 1/2, 1}.
std::vector<Rational> default_s_grid();

struct ResponsiveVerdict {
  bool accepted = false;
  /// "admissible", "safe-floor" or "reaction".
  std::string violated;
  std::optional<std::size_t> bidder;
  std::optional<std::size_t> t1, t2;  ///< violating interval (t1, t2], 1-based rounds
  std::optional<Rational> s;
  AdmissibleVerdict admissible;
  std::string detail;
};

ResponsiveVerdict check_responsive(const Instance& instance, const SequenceTrace& trace, const ResponsiveParams& params);

/// Direct scan over all intervals; the reference for check_responsive.
ResponsiveVerdict check_responsive_naive(const Instance& instance, const SequenceTrace& trace,
                                         const ResponsiveParams& params);

/// Largest c from `c_grid` for which the trace is responsive, if any.
std::optional<Rational> largest_responsive_c(const Instance& instance, const SequenceTrace& trace,
                                             ResponsiveParams params, const std::vector<Rational>& c_grid);

/// {1/8, 1/4, 1/2, 1, 2, 4, 8, 16}.
std::vector<Rational> default_c_grid();

struct PsiVerdict {
  bool accepted = false;
  Rational c;
  std::string detail;
};

/// psi(1+s) >= min(cap, (1+cs) m_safe) for each s > 0 with the rule's own c,
/// and psi(s') = m_safe for sampled s' < 1.
PsiVerdict verify_psi_constants(const UpdateRule& rule, const std::vector<Rational>& s_samples);

struct TGoodReport {
  Rational threshold;                ///< lambda M |Sigma| / K + 1
  std::vector<Rational> per_variable;
  Rational global;                   ///< rounds good for every variable / T
};

TGoodReport tgood_fraction(const CompiledInstance& compiled, const SequenceTrace& trace, const Rational& lambda);

struct AverageMetrics {
  Rational welfare;
  Rational revenue;
  /// Welfare mode: clause bidder's average share of its incumbent item.
  std::vector<Rational> capture;
  /// Average price of each clause item.
  std::vector<Rational> clause_price;
};

AverageMetrics average_metrics(const Instance& instance, const SequenceTrace& trace,
                               const CompiledInstance* compiled = nullptr);

}  // namespace autobid
