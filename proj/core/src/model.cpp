#include "autobid/model.hpp"

#include "autobid/errors.hpp"
#include "autobid/lp.hpp"

namespace autobid {

Instance Instance::make(std::size_t n, std::size_t k, Rational cap) {
  Instance inst;
  inst.n = n;
  inst.k = k;
  inst.values = Matrix<Rational>(n, k, Rational(0));
  inst.reserves.assign(k, Rational(0));
  inst.cap = std::move(cap);
  inst.ros_targets.assign(n, Rational(1));
  inst.budgets.assign(n, std::nullopt);
  return inst;
}

bool Instance::has_default_targets() const {
  for (std::size_t i = 0; i < n; ++i) {
    if (ros_targets[i] != 1 || budgets[i].has_value()) return false;
  }
  return true;
}

void Instance::validate() const {
  if (values.rows() != n || values.cols() != k) throw InputError("values matrix does not match n x k");
  if (reserves.size() != k) throw InputError("reserves must have k entries");
  if (ros_targets.size() != n) throw InputError("tau must have n entries");
  if (budgets.size() != n) throw InputError("budgets must have n entries");
  if (!bidder_labels.empty() && bidder_labels.size() != n) throw InputError("bidder labels must have n entries");
  if (!item_labels.empty() && item_labels.size() != k) throw InputError("item labels must have k entries");
  if (cap < 1) throw InputError("cap must be at least 1");
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      if (values(i, j) < 0) throw InputError("values must be nonnegative");
    }
    if (ros_targets[i] < 1) throw InputError("tau must be at least 1");
    if (budgets[i] && *budgets[i] <= 0) throw InputError("budgets must be positive");
  }
  for (const auto& r : reserves) {
    if (r < 0) throw InputError("reserves must be nonnegative");
  }
}

void validate_profile(const Instance& instance, const Profile& m) {
  if (m.size() != instance.n) throw InputError("profile must have one multiplier per bidder");
  for (const auto& mi : m) {
    if (mi < 1 || mi > instance.cap) {
      throw InputError("multiplier " + to_string(mi) + " outside [1, " + to_string(instance.cap) + "]");
    }
  }
}

Outcome Outcome::empty(std::size_t n, std::size_t k) {
  Outcome o;
  o.allocation = Matrix<Rational>(n, k, Rational(0));
  o.reserve_share.assign(k, Rational(0));
  o.prices.assign(k, Rational(0));
  o.unit_price = Matrix<Rational>(n, k, Rational(0));
  return o;
}

void check_shape(const Instance& instance, const Outcome& outcome) {
  if (outcome.allocation.rows() != instance.n || outcome.allocation.cols() != instance.k ||
      outcome.unit_price.rows() != instance.n || outcome.unit_price.cols() != instance.k ||
      outcome.reserve_share.size() != instance.k || outcome.prices.size() != instance.k) {
    throw InputError("outcome shape does not match instance");
  }
}

Rational value_obtained(const Instance& instance, const Outcome& outcome, std::size_t bidder) {
  Rational total;
  for (std::size_t j = 0; j < instance.k; ++j) total += outcome.allocation(bidder, j) * instance.values(bidder, j);
  return total;
}

Rational spend(const Outcome& outcome, std::size_t bidder) {
  Rational total;
  for (std::size_t j = 0; j < outcome.allocation.cols(); ++j) {
    total += outcome.allocation(bidder, j) * outcome.unit_price(bidder, j);
  }
  return total;
}

Rational optimal_welfare(const Instance& instance) {
  if (instance.has_default_targets()) {
    Rational total;
    for (std::size_t j = 0; j < instance.k; ++j) {
      Rational best;
      for (std::size_t i = 0; i < instance.n; ++i) best = max(best, instance.values(i, j));
      total += best;
    }
    return total;
  }
  using Sense = LinearProgram::Sense;
  LinearProgram lp;
  Matrix<std::size_t> var(instance.n, instance.k, 0);
  Matrix<char> used(instance.n, instance.k, 0);
  for (std::size_t i = 0; i < instance.n; ++i) {
    for (std::size_t j = 0; j < instance.k; ++j) {
      if (sgn(instance.values(i, j)) > 0) {
        var(i, j) = lp.add_var();
        used(i, j) = true;
      }
    }
  }
  for (std::size_t j = 0; j < instance.k; ++j) {
    std::vector<LinearProgram::Term> terms;
    for (std::size_t i = 0; i < instance.n; ++i) {
      if (used(i, j)) terms.push_back({var(i, j), Rational(1)});
    }
    if (!terms.empty()) lp.add_row(std::move(terms), Sense::le, Rational(1));
  }
  for (std::size_t i = 0; i < instance.n; ++i) {
    const std::size_t w = lp.add_var();
    lp.set_objective(w, Rational(1));
    std::vector<LinearProgram::Term> terms{{w, instance.ros_targets[i]}};
    for (std::size_t j = 0; j < instance.k; ++j) {
      if (used(i, j)) terms.push_back({var(i, j), Rational(-instance.values(i, j))});
    }
    lp.add_row(std::move(terms), Sense::le, Rational(0));
    if (instance.budgets[i]) lp.add_row({{w, Rational(1)}}, Sense::le, *instance.budgets[i]);
  }
  return solve(lp).objective;
}

Rational liquid_welfare(const Instance& instance, const Outcome& outcome) {
  check_shape(instance, outcome);
  Rational total;
  for (std::size_t i = 0; i < instance.n; ++i) {
    Rational v = value_obtained(instance, outcome, i) / instance.ros_targets[i];
    if (instance.budgets[i]) v = min(v, *instance.budgets[i]);
    total += v;
  }
  return total;
}

Rational revenue(const Outcome& outcome) {
  Rational total;
  for (std::size_t i = 0; i < outcome.allocation.rows(); ++i) total += spend(outcome, i);
  return total;
}

Instance scale_instance(const Instance& instance, const Rational& eta) {
  if (eta <= 0) throw ParameterError("scale factor must be positive");
  Instance out = instance;
  for (std::size_t i = 0; i < out.n; ++i) {
    for (std::size_t j = 0; j < out.k; ++j) out.values(i, j) *= eta;
    if (out.budgets[i]) *out.budgets[i] *= eta;
  }
  for (auto& r : out.reserves) r *= eta;
  return out;
}

}  // namespace autobid
