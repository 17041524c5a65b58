#include "autobid/support_system.hpp"

#include "autobid/errors.hpp"

namespace autobid::detail {

SupportSystem build_support_system(const Instance& instance, const Profile& m, const SupportOptions& options) {
  using Sense = LinearProgram::Sense;
  using Term = LinearProgram::Term;
  const std::size_t n = instance.n;
  const std::size_t k = instance.k;
  const Rational one_minus = Rational(1) - options.beta;
  const Rational one_plus = Rational(1) + options.beta;

  SupportSystem sys;
  sys.item_vars.assign(k, {});
  sys.reserve_var.assign(k, std::nullopt);
  sys.null_item.assign(k, false);
  sys.prices.assign(k, Rational(0));
  sys.unit_price = Matrix<Rational>(n, k, Rational(0));

  std::vector<std::vector<Term>> ros_terms(n);
  std::vector<std::vector<Term>> pacing_terms(n);
  std::vector<Term> objective;

  std::vector<Rational> column(n);
  for (std::size_t j = 0; j < k; ++j) {
    if (!options.include_item.empty() && !options.include_item[j]) continue;
    const Rational& r = instance.reserves[j];
    Rational top = r;
    for (std::size_t i = 0; i < n; ++i) {
      column[i] = m[i] * instance.values(i, j);
      top = max(top, column[i]);
    }
    // Multiset {b_1j..b_nj, r_j} with one copy of the top removed.
    std::size_t copies = (r == top) ? 1 : 0;
    Rational second = (r == top) ? Rational(0) : r;
    for (std::size_t i = 0; i < n; ++i) {
      if (column[i] == top) ++copies;
      else second = max(second, column[i]);
    }
    if (copies >= 2) second = top;
    sys.prices[j] = second;
    if (sgn(top) == 0) {
      sys.null_item[j] = true;
      continue;
    }
    const Rational threshold = one_minus * top;
    std::vector<Term> row;
    for (std::size_t i = 0; i < n; ++i) {
      if (sgn(column[i]) == 0 || column[i] < threshold) continue;
      // Per-winner price: highest competing bid or reserve.
      Rational p = r;
      for (std::size_t o = 0; o < n; ++o) {
        if (o != i) p = max(p, column[o]);
      }
      sys.unit_price(i, j) = p;
      const std::size_t var = sys.lp.add_var();
      sys.item_vars[j].push_back({i, var});
      row.push_back({var, Rational(1)});
      const Rational& v = instance.values(i, j);
      const Rational& tau = instance.ros_targets[i];
      Rational ros_coeff = v - one_minus * tau * p;
      Rational pacing_coeff = v - one_plus * tau * p;
      if (sgn(ros_coeff) != 0) ros_terms[i].push_back({var, ros_coeff});
      if (sgn(pacing_coeff) != 0) pacing_terms[i].push_back({var, pacing_coeff});
      switch (options.objective) {
        case WitnessObjective::max_welfare: objective.push_back({var, v / tau}); break;
        case WitnessObjective::min_welfare: objective.push_back({var, -v / tau}); break;
        case WitnessObjective::max_revenue: objective.push_back({var, p}); break;
        case WitnessObjective::min_revenue: objective.push_back({var, -p}); break;
        case WitnessObjective::none: break;
      }
    }
    if (sgn(r) > 0 && r >= threshold) {
      const std::size_t var = sys.lp.add_var();
      sys.reserve_var[j] = var;
      row.push_back({var, Rational(1)});
    }
    sys.lp.add_row(std::move(row), Sense::eq, Rational(1));
  }

  const bool exact = sgn(options.beta) == 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!options.constrain.empty() && !options.constrain[i]) continue;
    const bool exempt = !options.pacing_exempt.empty() && options.pacing_exempt[i];
    const bool below_cap = m[i] < instance.cap && !exempt;
    if (options.binding_only) {
      if (below_cap && !ros_terms[i].empty()) sys.lp.add_row(ros_terms[i], Sense::eq, Rational(0));
      continue;
    }
    if (exact && options.ros_rows && options.pacing_rows && below_cap) {
      if (!ros_terms[i].empty()) sys.lp.add_row(ros_terms[i], Sense::eq, Rational(0));
      continue;
    }
    if (options.ros_rows && !ros_terms[i].empty()) sys.lp.add_row(ros_terms[i], Sense::ge, Rational(0));
    if (options.pacing_rows && below_cap && !pacing_terms[i].empty()) {
      sys.lp.add_row(pacing_terms[i], Sense::le, Rational(0));
    }
  }
  for (auto& t : objective) sys.lp.set_objective(t.var, t.coeff);
  return sys;
}

Outcome extract_outcome(const Instance& instance, const SupportSystem& system, const std::vector<Rational>& x) {
  Outcome out = Outcome::empty(instance.n, instance.k);
  out.prices = system.prices;
  out.unit_price = system.unit_price;
  for (std::size_t j = 0; j < instance.k; ++j) {
    if (system.null_item[j]) {
      if (instance.n > 0) out.allocation(0, j) = 1;
      continue;
    }
    for (const auto& sv : system.item_vars[j]) out.allocation(sv.bidder, j) = x[sv.var];
    if (system.reserve_var[j]) out.reserve_share[j] = x[*system.reserve_var[j]];
  }
  return out;
}

}  // namespace autobid::detail
