#include "autobid/equilibrium.hpp"

#include "autobid/errors.hpp"

#include <limits>
#include <stdexcept>
#include <string>

namespace autobid {

namespace {

constexpr std::size_t kUnset = std::numeric_limits<std::size_t>::max();

class Searcher {
 public:
  Searcher(const Instance& instance, const GridSpec& grid, const SearchOptions& options)
      : inst_(instance), grid_(grid), opts_(options) {
    budget_ = options.budget ? options.budget : default_budget();
    items_of_.resize(inst_.n);
    bidders_of_.resize(inst_.k);
    for (std::size_t i = 0; i < inst_.n; ++i) {
      for (std::size_t j = 0; j < inst_.k; ++j) {
        if (sgn(inst_.values(i, j)) > 0) {
          items_of_[i].push_back(j);
          bidders_of_[j].push_back(i);
        }
      }
    }
    plan_order();
    m_.assign(inst_.n, Rational(1));
  }

  SearchResult run() {
    result_.grid_size = 1;
    for (const auto& c : grid_.candidates) result_.grid_size *= static_cast<long double>(c.size());
    if (!opts_.prune && result_.grid_size > static_cast<long double>(budget_)) {
      throw BudgetError("grid has " + std::to_string(static_cast<double>(result_.grid_size)) +
                        " profiles, budget is " + std::to_string(budget_));
    }
    recurse(0);
    annotate_extremes();
    return std::move(result_);
  }

 private:
  // Greedy closure order: prefer the bidder whose assignment closes the most
  // items, then the one with the most already-placed neighbours.
  void plan_order() {
    const std::size_t n = inst_.n;
    std::vector<bool> placed(n, false);
    std::vector<std::size_t> open_count(inst_.k);
    for (std::size_t j = 0; j < inst_.k; ++j) open_count[j] = bidders_of_[j].size();
    order_.clear();
    for (std::size_t step = 0; step < n; ++step) {
      std::size_t best = kUnset;
      std::size_t best_closed = 0;
      std::size_t best_touch = 0;
      for (std::size_t i = 0; i < n; ++i) {
        if (placed[i]) continue;
        std::size_t closes = 0;
        std::size_t touch = 0;
        for (std::size_t j : items_of_[i]) {
          if (open_count[j] == 1) ++closes;
          touch += bidders_of_[j].size() - open_count[j];
        }
        if (best == kUnset || closes > best_closed || (closes == best_closed && touch > best_touch)) {
          best = i;
          best_closed = closes;
          best_touch = touch;
        }
      }
      placed[best] = true;
      for (std::size_t j : items_of_[best]) --open_count[j];
      order_.push_back(best);
    }
    std::vector<std::size_t> depth_of(n);
    for (std::size_t d = 0; d < n; ++d) depth_of[order_[d]] = d;
    item_close_.assign(inst_.k, 0);
    for (std::size_t j = 0; j < inst_.k; ++j) {
      for (std::size_t i : bidders_of_[j]) item_close_[j] = std::max(item_close_[j], depth_of[i]);
    }
    bidder_close_.assign(n, 0);
    closing_at_.assign(n, {});
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t d = depth_of[i];
      for (std::size_t j : items_of_[i]) d = std::max(d, item_close_[j]);
      bidder_close_[i] = d;
      closing_at_[d].push_back(i);
    }
  }

  bool component_feasible(std::size_t depth) {
    std::vector<bool> constrain(inst_.n, false);
    std::vector<bool> include(inst_.k, false);
    std::vector<std::size_t> stack;
    for (std::size_t b : closing_at_[depth]) {
      if (items_of_[b].empty()) continue;
      constrain[b] = true;
      stack.push_back(b);
    }
    if (stack.empty()) return true;
    while (!stack.empty()) {
      const std::size_t b = stack.back();
      stack.pop_back();
      for (std::size_t j : items_of_[b]) {
        if (include[j]) continue;
        include[j] = true;
        for (std::size_t o : bidders_of_[j]) {
          if (!constrain[o] && bidder_close_[o] <= depth) {
            constrain[o] = true;
            stack.push_back(o);
          }
        }
      }
    }
    detail::SupportOptions so;
    so.beta = grid_.beta;
    so.constrain = std::move(constrain);
    so.include_item = std::move(include);
    return solve(detail::build_support_system(inst_, m_, so).lp).feasible();
  }

  void recurse(std::size_t depth) {
    if (depth == inst_.n) {
      leaf();
      return;
    }
    const std::size_t b = order_[depth];
    for (const auto& c : grid_.candidates[b]) {
      if (++result_.nodes > budget_) {
        throw BudgetError("grid search exceeded budget of " + std::to_string(budget_) + " nodes");
      }
      m_[b] = c;
      if (opts_.prune && !component_feasible(depth)) continue;
      recurse(depth + 1);
    }
    m_[b] = Rational(1);
  }

  void leaf() {
    ++result_.leaves;
    Verdict v = check_approx_equilibrium(inst_, m_, grid_.beta);
    if (!v.accepted) {
      if (opts_.prune) throw std::logic_error("pruned search reached a rejected profile");
      return;
    }
    EquilibriumRow row;
    row.profile = m_;
    row.welfare = liquid_welfare(inst_, *v.witness);
    row.revenue = revenue(*v.witness);
    if (opts_.witness_ranges && inst_.has_default_targets()) {
      auto extreme = [&](WitnessObjective o) {
        auto w = check_approx_equilibrium(inst_, m_, grid_.beta, o);
        return w.witness.value();
      };
      row.welfare_max = liquid_welfare(inst_, extreme(WitnessObjective::max_welfare));
      row.welfare_min = liquid_welfare(inst_, extreme(WitnessObjective::min_welfare));
      row.revenue_max = revenue(extreme(WitnessObjective::max_revenue));
      row.revenue_min = revenue(extreme(WitnessObjective::min_revenue));
    }
    row.verdict = std::move(v);
    result_.rows.push_back(std::move(row));
  }

  void annotate_extremes() {
    const auto& rows = result_.rows;
    for (std::size_t r = 0; r < rows.size(); ++r) {
      const Rational whi = rows[r].welfare_max.value_or(rows[r].welfare);
      const Rational wlo = rows[r].welfare_min.value_or(rows[r].welfare);
      const Rational rhi = rows[r].revenue_max.value_or(rows[r].revenue);
      const Rational rlo = rows[r].revenue_min.value_or(rows[r].revenue);
      auto pick = [&](std::optional<std::size_t>& slot, auto better) {
        if (!slot || better(*slot)) slot = r;
      };
      pick(result_.best_welfare, [&](std::size_t s) { return whi > rows[s].welfare_max.value_or(rows[s].welfare); });
      pick(result_.worst_welfare, [&](std::size_t s) { return wlo < rows[s].welfare_min.value_or(rows[s].welfare); });
      pick(result_.best_revenue, [&](std::size_t s) { return rhi > rows[s].revenue_max.value_or(rows[s].revenue); });
      pick(result_.worst_revenue, [&](std::size_t s) { return rlo < rows[s].revenue_min.value_or(rows[s].revenue); });
    }
  }

  const Instance& inst_;
  const GridSpec& grid_;
  const SearchOptions& opts_;
  std::size_t budget_ = 0;
  std::vector<std::vector<std::size_t>> items_of_;
  std::vector<std::vector<std::size_t>> bidders_of_;
  std::vector<std::size_t> order_;
  std::vector<std::size_t> item_close_;
  std::vector<std::size_t> bidder_close_;
  std::vector<std::vector<std::size_t>> closing_at_;
  Profile m_;
  SearchResult result_;
};

}  // namespace

SearchResult grid_search_equilibria(const Instance& instance, const GridSpec& grid, const SearchOptions& options) {
  instance.validate();
  if (grid.candidates.size() != instance.n) throw InputError("grid must list candidates for every bidder");
  if (grid.beta < 0 || grid.beta >= 1) throw ParameterError("beta must lie in [0, 1)");
  for (const auto& c : grid.candidates) {
    if (c.empty()) throw InputError("every bidder needs at least one candidate multiplier");
    for (const auto& x : c) {
      if (x < 1 || x > instance.cap) throw InputError("grid candidate " + to_string(x) + " outside [1, cap]");
    }
  }
  if (instance.n == 0) {
    SearchResult r;
    r.grid_size = 1;
    Verdict v = check_approx_equilibrium(instance, {}, grid.beta);
    EquilibriumRow row{{}, v, liquid_welfare(instance, *v.witness), revenue(*v.witness), {}, {}, {}, {}};
    r.rows.push_back(std::move(row));
    r.leaves = 1;
    r.best_welfare = r.worst_welfare = r.best_revenue = r.worst_revenue = 0;
    return r;
  }
  Searcher s(instance, grid, options);
  return s.run();
}

}  // namespace autobid
