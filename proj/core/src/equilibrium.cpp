#include "autobid/equilibrium.hpp"

#include "autobid/auction.hpp"
#include "autobid/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <set>

namespace autobid {

std::string condition_name(Condition c) {
  switch (c) {
    case Condition::highest_bid: return "highest-bid";
    case Condition::second_price: return "second-price";
    case Condition::full_allocation: return "full-allocation";
    case Condition::ros: return "ros";
    case Condition::maximal_pacing: return "maximal-pacing";
  }
  return "unknown";
}

namespace {

std::vector<Rational> residuals_of(const Instance& instance, const Outcome& outcome) {
  std::vector<Rational> res(instance.n);
  for (std::size_t i = 0; i < instance.n; ++i) {
    res[i] = value_obtained(instance, outcome, i) - instance.ros_targets[i] * spend(outcome, i);
  }
  return res;
}

std::string bidder_name(const Instance& instance, std::size_t i) {
  if (!instance.bidder_labels.empty()) return instance.bidder_labels[i];
  return "bidder " + std::to_string(i);
}

void check_beta(const Rational& beta) {
  if (beta < 0 || beta >= 1) throw ParameterError("beta must lie in [0, 1)");
}

}  // namespace

Verdict check_approx_equilibrium(const Instance& instance, const Profile& m, const Rational& beta,
                                 WitnessObjective objective) {
  check_beta(beta);
  validate_profile(instance, m);
  detail::SupportOptions opts;
  opts.beta = beta;
  opts.objective = objective;
  auto sys = detail::build_support_system(instance, m, opts);
  const auto res = solve(sys.lp);
  Verdict v;
  if (res.feasible()) {
    v.accepted = true;
    v.witness = detail::extract_outcome(instance, sys, res.x);
    v.residuals = residuals_of(instance, *v.witness);
    return v;
  }
  opts.objective = WitnessObjective::none;
  opts.pacing_rows = false;
  const bool ros_feasible = solve(detail::build_support_system(instance, m, opts).lp).feasible();
  v.violated = ros_feasible ? Condition::maximal_pacing : Condition::ros;
  v.residuals = residuals_of(instance, equal_split(instance, clear(instance, m)));

  // Name the bidders whose constraints alone block feasibility.
  if (instance.n <= 64) {
    std::vector<std::string> blamed;
    for (std::size_t i = 0; i < instance.n; ++i) {
      detail::SupportOptions probe;
      probe.beta = beta;
      probe.pacing_rows = ros_feasible;
      if (ros_feasible) {
        probe.pacing_exempt.assign(instance.n, false);
        probe.pacing_exempt[i] = true;
      } else {
        probe.constrain.assign(instance.n, true);
        probe.constrain[i] = false;
      }
      if (solve(detail::build_support_system(instance, m, probe).lp).feasible()) {
        blamed.push_back(bidder_name(instance, i));
      }
    }
    v.detail = condition_name(*v.violated);
    if (!blamed.empty()) {
      v.detail += " (binding for:";
      for (const auto& b : blamed) v.detail += " " + b;
      v.detail += ")";
    }
  }
  return v;
}

Verdict check_equilibrium(const Instance& instance, const Profile& m, WitnessObjective objective) {
  return check_approx_equilibrium(instance, m, Rational(0), objective);
}

Verdict check_outcome(const Instance& instance, const Profile& m, const Outcome& outcome, const Rational& beta) {
  check_beta(beta);
  validate_profile(instance, m);
  check_shape(instance, outcome);
  const Matrix<Rational> b = bids(instance, m);
  const Clearing c = clear(instance, m);
  const Rational one_minus = Rational(1) - beta;
  Verdict v;
  v.residuals = residuals_of(instance, outcome);
  auto reject = [&](Condition cond, std::string why) {
    v.accepted = false;
    v.violated = cond;
    v.detail = condition_name(cond) + ": " + why;
    return v;
  };
  for (std::size_t j = 0; j < instance.k; ++j) {
    Rational total = outcome.reserve_share[j];
    for (std::size_t i = 0; i < instance.n; ++i) {
      if (outcome.allocation(i, j) < 0) return reject(Condition::full_allocation, "negative share on item " + std::to_string(j));
      total += outcome.allocation(i, j);
    }
    if (outcome.reserve_share[j] < 0 || total != 1) {
      return reject(Condition::full_allocation, "item " + std::to_string(j) + " allocated " + to_string(total));
    }
  }
  for (std::size_t j = 0; j < instance.k; ++j) {
    const auto& item = c.items[j];
    if (item.null_item()) continue;
    const Rational threshold = one_minus * item.top;
    for (std::size_t i = 0; i < instance.n; ++i) {
      if (sgn(outcome.allocation(i, j)) == 0) continue;
      if (sgn(b(i, j)) == 0 || b(i, j) < threshold) {
        return reject(Condition::highest_bid, bidder_name(instance, i) + " wins item " + std::to_string(j) + " without a top bid");
      }
    }
    if (sgn(outcome.reserve_share[j]) > 0 && (sgn(instance.reserves[j]) == 0 || instance.reserves[j] < threshold)) {
      return reject(Condition::highest_bid, "reserve keeps item " + std::to_string(j) + " below the top bid");
    }
  }
  for (std::size_t j = 0; j < instance.k; ++j) {
    if (c.items[j].null_item()) continue;
    for (std::size_t i = 0; i < instance.n; ++i) {
      if (sgn(outcome.allocation(i, j)) == 0) continue;
      Rational p = instance.reserves[j];
      for (std::size_t o = 0; o < instance.n; ++o) {
        if (o != i) p = max(p, b(o, j));
      }
      if (outcome.unit_price(i, j) != p) {
        return reject(Condition::second_price, bidder_name(instance, i) + " pays " + to_string(outcome.unit_price(i, j)) +
                                                   " on item " + std::to_string(j) + ", expected " + to_string(p));
      }
    }
  }
  for (std::size_t i = 0; i < instance.n; ++i) {
    const Rational val = value_obtained(instance, outcome, i);
    const Rational pay = instance.ros_targets[i] * spend(outcome, i);
    if (val < one_minus * pay) return reject(Condition::ros, bidder_name(instance, i) + " residual " + to_string(val - pay));
  }
  for (std::size_t i = 0; i < instance.n; ++i) {
    if (m[i] >= instance.cap) continue;
    const Rational val = value_obtained(instance, outcome, i);
    const Rational pay = instance.ros_targets[i] * spend(outcome, i);
    if (val > (Rational(1) + beta) * pay) {
      return reject(Condition::maximal_pacing, bidder_name(instance, i) + " below cap with residual " + to_string(val - pay));
    }
  }
  v.accepted = true;
  v.witness = outcome;
  return v;
}

bool check_conservative_extension(const Instance& inner, const Instance& outer,
                                  const std::vector<std::size_t>& bidder_map,
                                  const std::vector<std::size_t>& item_map) {
  if (bidder_map.size() != inner.n || item_map.size() != inner.k) throw InputError("maps must cover the inner instance");
  std::vector<bool> inner_bidder(outer.n, false);
  std::vector<bool> inner_item(outer.k, false);
  for (std::size_t b : bidder_map) {
    if (b >= outer.n || inner_bidder[b]) throw InputError("bidder map is not an injective embedding");
    inner_bidder[b] = true;
  }
  for (std::size_t it : item_map) {
    if (it >= outer.k || inner_item[it]) throw InputError("item map is not an injective embedding");
    inner_item[it] = true;
  }
  for (std::size_t i = 0; i < inner.n; ++i) {
    for (std::size_t j = 0; j < inner.k; ++j) {
      if (inner.values(i, j) != outer.values(bidder_map[i], item_map[j])) {
        throw InputError("inner values disagree with the outer instance under the maps");
      }
    }
  }
  for (std::size_t j = 0; j < outer.k; ++j) {
    Rational threshold = outer.reserves[j];
    for (std::size_t i = 0; i < outer.n; ++i) {
      if (inner_bidder[i] == inner_item[j]) threshold = max(threshold, outer.values(i, j));
    }
    for (std::size_t i = 0; i < outer.n; ++i) {
      if (inner_bidder[i] == inner_item[j]) continue;
      const Rational& v = outer.values(i, j);
      if (sgn(v) != 0 && !(outer.cap * v < threshold)) return false;
    }
  }
  return true;
}

std::vector<Rational> linear_grid(const Rational& cap, const Rational& step, const std::vector<Rational>& extra) {
  if (step <= 0) throw ParameterError("grid step must be positive");
  std::set<Rational> pts{Rational(1), cap};
  for (Rational x = 1; x < cap; x += step) pts.insert(x);
  for (const auto& e : extra) {
    if (e >= 1 && e <= cap) pts.insert(e);
  }
  return {pts.begin(), pts.end()};
}

std::vector<Rational> geometric_grid(const Rational& cap, std::size_t points, const std::vector<Rational>& extra) {
  std::set<Rational> pts{Rational(1), cap};
  const double c = to_double(cap);
  const Rational quantum(1, 1 << 20);
  for (std::size_t t = 1; t < points; ++t) {
    const double x = std::pow(c, static_cast<double>(t) / static_cast<double>(points));
    Rational q = ceil_to(Rational(x), quantum);
    if (q > 1 && q < cap) pts.insert(q);
  }
  for (const auto& e : extra) {
    if (e >= 1 && e <= cap) pts.insert(e);
  }
  return {pts.begin(), pts.end()};
}

GridSpec uniform_grid(const Instance& instance, const std::vector<Rational>& candidates, const Rational& beta) {
  GridSpec g;
  g.candidates.assign(instance.n, candidates);
  g.beta = beta;
  return g;
}

std::size_t default_budget() {
  if (const char* env = std::getenv("AUTOBID_BUDGET")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
    throw ParameterError("AUTOBID_BUDGET must be a positive integer");
  }
  return 10'000'000;
}

PoaReport poa_report(const Instance& instance, const std::vector<EquilibriumRow>& equilibria) {
  if (equilibria.empty()) throw InputError("no accepted equilibria to report on");
  PoaReport r;
  r.optimum = optimal_welfare(instance);
  auto low_w = [](const EquilibriumRow& e) { return e.welfare_min.value_or(e.welfare); };
  auto high_w = [](const EquilibriumRow& e) { return e.welfare_max.value_or(e.welfare); };
  auto low_r = [](const EquilibriumRow& e) { return e.revenue_min.value_or(e.revenue); };
  auto high_r = [](const EquilibriumRow& e) { return e.revenue_max.value_or(e.revenue); };
  Rational wmin = low_w(equilibria[0]), wmax = high_w(equilibria[0]);
  Rational rmin = low_r(equilibria[0]), rmax = high_r(equilibria[0]);
  for (const auto& e : equilibria) {
    wmin = min(wmin, low_w(e));
    wmax = max(wmax, high_w(e));
    rmin = min(rmin, low_r(e));
    rmax = max(rmax, high_r(e));
  }
  r.poa_sample = Extended::ratio(r.optimum, wmin);
  r.welfare_spread = Extended::ratio(wmax, wmin);
  r.revenue_spread = Extended::ratio(rmax, rmin);
  for (const auto& e : equilibria) {
    r.welfare_rho.push_back(Extended::ratio(wmax, low_w(e)));
    r.revenue_rho.push_back(Extended::ratio(rmax, low_r(e)));
  }
  return r;
}

}  // namespace autobid
