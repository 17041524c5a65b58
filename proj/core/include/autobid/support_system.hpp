#pragma once

#include "autobid/lp.hpp"
#include "autobid/model.hpp"

#include <cstddef>
#include <optional>
#include <vector>

namespace autobid::detail {

enum class WitnessObjective { none, max_welfare, min_welfare, max_revenue, min_revenue };

struct SupportOptions {
  Rational beta{0};
  /// Bidders whose RoS and pacing rows are emitted; empty means all.
  std::vector<bool> constrain;
  /// Items whose allocation rows are emitted; empty means all.
  std::vector<bool> include_item;
  /// Bidders whose pacing row is dropped while their RoS row stays.
  std::vector<bool> pacing_exempt;
  bool ros_rows = true;
  bool pacing_rows = true;
  /// Emit RoS rows only for bidders below the cap (as equalities).
  bool binding_only = false;
  WitnessObjective objective = WitnessObjective::none;
};

struct SupportVar {
  std::size_t bidder;
  std::size_t var;
};

/// Allocation LP over the (near-)winner support of a fixed profile.
struct SupportSystem {
  LinearProgram lp;
  std::vector<std::vector<SupportVar>> item_vars;
  std::vector<std::optional<std::size_t>> reserve_var;
  std::vector<bool> null_item;
  std::vector<Rational> prices;
  Matrix<Rational> unit_price;
};

/// Profile entries of bidders whose items are all excluded may be arbitrary.
SupportSystem build_support_system(const Instance& instance, const Profile& m, const SupportOptions& options);

/// Turns an LP solution into an outcome; null items go to bidder 0.
Outcome extract_outcome(const Instance& instance, const SupportSystem& system, const std::vector<Rational>& x);

}  // namespace autobid::detail
