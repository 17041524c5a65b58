#pragma once

#include "autobid/model.hpp"
#include "autobid/support_system.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace autobid {

enum class Condition { highest_bid, second_price, full_allocation, ros, maximal_pacing };

std::string condition_name(Condition c);

struct Verdict {
  bool accepted = false;
  std::optional<Outcome> witness;
  std::optional<Condition> violated;
  /// Per bidder: value minus tau-weighted spend under the witness, or under
  /// equal splitting when rejected.
  std::vector<Rational> residuals;
  std::string detail;
};

using detail::WitnessObjective;

Verdict check_equilibrium(const Instance& instance, const Profile& m,
                          WitnessObjective objective = WitnessObjective::none);

Verdict check_approx_equilibrium(const Instance& instance, const Profile& m, const Rational& beta,
                                 WitnessObjective objective = WitnessObjective::none);

/// Checks a concrete allocation against the (approximate) conditions.
Verdict check_outcome(const Instance& instance, const Profile& m, const Outcome& outcome,
                      const Rational& beta = Rational(0));

/// bidder_map[i] / item_map[j] give the outer index of inner bidder i / item j.
bool check_conservative_extension(const Instance& inner, const Instance& outer,
                                  const std::vector<std::size_t>& bidder_map,
                                  const std::vector<std::size_t>& item_map);

struct GridSpec {
  std::vector<std::vector<Rational>> candidates;
  Rational beta{0};
};

/// 1, cap, equal steps of `step` from 1 and the given extra points, sorted.
std::vector<Rational> linear_grid(const Rational& cap, const Rational& step,
                                  const std::vector<Rational>& extra = {});
/// 1, cap and `points` geometric steps between them (rounded to 1/2^20), plus extras.
std::vector<Rational> geometric_grid(const Rational& cap, std::size_t points,
                                     const std::vector<Rational>& extra = {});

GridSpec uniform_grid(const Instance& instance, const std::vector<Rational>& candidates,
                      const Rational& beta = Rational(0));

struct EquilibriumRow {
  Profile profile;
  Verdict verdict;
  Rational welfare;
  Rational revenue;
  /// Extremes over all witness allocations for the profile (infinite budgets only).
  std::optional<Rational> welfare_min, welfare_max, revenue_min, revenue_max;
};

struct SearchOptions {
  bool prune = true;
  bool witness_ranges = false;
  /// Limit on explored search nodes; 0 reads AUTOBID_BUDGET or the default.
  std::size_t budget = 0;
};

struct SearchResult {
  std::vector<EquilibriumRow> rows;
  std::size_t nodes = 0;       ///< search nodes explored
  std::size_t leaves = 0;      ///< complete profiles checked
  long double grid_size = 0;   ///< product of candidate counts
  std::optional<std::size_t> best_welfare, worst_welfare, best_revenue, worst_revenue;
};

std::size_t default_budget();

SearchResult grid_search_equilibria(const Instance& instance, const GridSpec& grid,
                                    const SearchOptions& options = {});

struct PoaReport {
  Rational optimum;
  Extended poa_sample;                ///< optimum / min equilibrium welfare
  Extended welfare_spread;            ///< max / min equilibrium welfare
  Extended revenue_spread;            ///< max / min equilibrium revenue
  std::vector<Extended> welfare_rho;  ///< max welfare / welfare of each row
  std::vector<Extended> revenue_rho;
};

/// Uses welfare_min / revenue_min when present, witness figures otherwise.
PoaReport poa_report(const Instance& instance, const std::vector<EquilibriumRow>& equilibria);

}  // namespace autobid
