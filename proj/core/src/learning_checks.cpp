#include "autobid/learning.hpp"

#include "autobid/errors.hpp"

#include <algorithm>
#include <sstream>

namespace autobid {

namespace {

std::string show(const Rational& x) { return to_string(x) + " (" + to_decimal(x) + ")"; }

/// Highest bid, second price and full allocation for one round.
std::optional<std::pair<Condition, std::string>> round_violation(const Instance& instance, const RoundRecord& rec) {
  check_shape(instance, rec.outcome);
  const Clearing clearing = clear(instance, rec.m);
  const Outcome& o = rec.outcome;
  for (std::size_t j = 0; j < instance.k; ++j) {
    const ItemClearing& c = clearing.items[j];
    const std::string where = "item " + std::to_string(j);
    if (o.prices[j] != c.price) return {{Condition::second_price, where + " price differs from the clearing price"}};
    Rational total = o.reserve_share[j];
    if (sgn(o.reserve_share[j]) < 0) return {{Condition::full_allocation, where + " has a negative share"}};
    if (sgn(o.reserve_share[j]) > 0 && !c.reserve_wins && !c.null_item()) {
      return {{Condition::highest_bid, where + " goes to the reserve below the top bid"}};
    }
    for (std::size_t i = 0; i < instance.n; ++i) {
      const Rational& x = o.allocation(i, j);
      if (sgn(x) < 0) return {{Condition::full_allocation, where + " has a negative share"}};
      total += x;
      if (sgn(x) == 0 || c.null_item()) continue;
      if (std::find(c.winners.begin(), c.winners.end(), i) == c.winners.end()) {
        return {{Condition::highest_bid, where + " allocated to bidder " + std::to_string(i) + " below the top bid"}};
      }
      if (o.unit_price(i, j) != c.price) {
        return {{Condition::second_price, where + " charges bidder " + std::to_string(i) + " off the clearing price"}};
      }
    }
    if (total != 1 && !(c.null_item() && total <= 1)) {
      return {{Condition::full_allocation, where + " shares sum to " + to_string(total)}};
    }
  }
  return std::nullopt;
}

struct BidderSeries {
  std::vector<Rational> m;   // m^{(1..T)}
  std::vector<bool> good;    // r^{(t)} >= 1 + s
};

BidderSeries series(const SequenceTrace& trace, std::size_t bidder, const Rational& s) {
  BidderSeries out;
  for (std::size_t t = 0; t < trace.T(); ++t) {
    out.m.push_back(trace.rounds[t].m[bidder]);
    out.good.push_back(trace.ratio(t, bidder) >= 1 + s);
  }
  return out;
}

std::size_t min_length(const Rational& alpha, std::size_t T) {
  const Rational aT = alpha * Rational(static_cast<unsigned long>(T));
  mpz_class fl;
  mpz_fdiv_q(fl.get_mpz_t(), aT.get_num_mpz_t(), aT.get_den_mpz_t());
  return static_cast<std::size_t>(fl.get_ui()) + 1;
}

using IntervalSearch = std::optional<std::pair<std::size_t, std::size_t>> (*)(const BidderSeries&, const Rational&,
                                                                             std::size_t);

/// Intervals (t1, t2] with good on [t1, t2-1], length >= L and average m below B.
std::optional<std::pair<std::size_t, std::size_t>> scan_linear(const BidderSeries& b, const Rational& B,
                                                               std::size_t L) {
  const std::size_t T = b.m.size();
  std::vector<Rational> D(T + 1);
  for (std::size_t t = 1; t <= T; ++t) D[t] = D[t - 1] + b.m[t - 1] - B;
  std::optional<std::size_t> run_start;
  std::size_t next_t1 = 0;
  constexpr std::size_t none = static_cast<std::size_t>(-1);
  std::size_t best = none;
  for (std::size_t t2 = 2; t2 <= T; ++t2) {
    if (!b.good[t2 - 2]) {
      run_start.reset();
      best = none;
      continue;
    }
    if (!run_start) {
      run_start = t2 - 1;
      next_t1 = t2 - 1;
    }
    while (next_t1 + L <= t2) {
      if (best == none || D[next_t1] > D[best]) best = next_t1;
      ++next_t1;
    }
    if (best != none && D[t2] < D[best]) return std::make_pair(best, t2);
  }
  return std::nullopt;
}

std::optional<std::pair<std::size_t, std::size_t>> scan_naive(const BidderSeries& b, const Rational& B,
                                                              std::size_t L) {
  const std::size_t T = b.m.size();
  for (std::size_t t1 = 1; t1 <= T; ++t1) {
    Rational sum;
    for (std::size_t t2 = t1 + 1; t2 <= T; ++t2) {
      if (!b.good[t2 - 2]) break;
      sum += b.m[t2 - 1];
      const std::size_t len = t2 - t1;
      if (len >= L && sum < B * Rational(static_cast<unsigned long>(len))) return std::make_pair(t1, t2);
    }
  }
  return std::nullopt;
}

ResponsiveVerdict responsive_impl(const Instance& instance, const SequenceTrace& trace, const ResponsiveParams& params,
                                  IntervalSearch search) {
  if (params.alpha < 0 || params.alpha >= 1) throw ParameterError("alpha must lie in [0, 1)");
  if (params.beta < 0) throw ParameterError("beta must be nonnegative");
  if (params.c <= 0) throw ParameterError("c must be positive");
  ResponsiveVerdict v;
  v.admissible = check_admissible(instance, trace, params.beta);
  if (!v.admissible.accepted) {
    v.violated = "admissible";
    v.detail = v.admissible.detail;
    return v;
  }
  const std::vector<Rational> safe = m_safe_all(instance, params.mu);
  for (std::size_t i = 0; i < instance.n; ++i) {
    for (std::size_t t = 0; t < trace.T(); ++t) {
      if (trace.rounds[t].m[i] < safe[i]) {
        v.violated = "safe-floor";
        v.bidder = i;
        v.t2 = t + 1;
        v.detail = "bidder " + std::to_string(i) + " bids " + show(trace.rounds[t].m[i]) + " below m_safe " +
                   show(safe[i]) + " in round " + std::to_string(t + 1);
        return v;
      }
    }
  }
  const std::size_t L = min_length(params.alpha, trace.T());
  const std::vector<Rational> grid = params.s_grid.empty() ? default_s_grid() : params.s_grid;
  for (const Rational& s : grid) {
    if (s <= 0) throw ParameterError("s grid entries must be positive");
    for (std::size_t i = 0; i < instance.n; ++i) {
      const Rational B = min(instance.cap, (1 + params.c * s) * safe[i]);
      const auto hit = search(series(trace, i, s), B, L);
      if (hit) {
        v.violated = "reaction";
        v.bidder = i;
        v.t1 = hit->first;
        v.t2 = hit->second;
        v.s = s;
        v.detail = "bidder " + std::to_string(i) + " averages below " + show(B) + " on (" +
                   std::to_string(hit->first) + ", " + std::to_string(hit->second) + "] at s = " + to_string(s);
        return v;
      }
    }
  }
  v.accepted = true;
  return v;
}

}  // namespace

AdmissibleVerdict check_admissible(const Instance& instance, const SequenceTrace& trace, const Rational& beta) {
  if (beta < 0) throw ParameterError("beta must be nonnegative");
  if (trace.T() == 0) throw InputError("trace has no rounds");
  if (trace.cum_value.size() != trace.T() || trace.cum_spend.size() != trace.T()) {
    throw InputError("trace running sums do not match its rounds");
  }
  AdmissibleVerdict v;
  std::vector<Rational> cv(instance.n), cs(instance.n);
  for (std::size_t t = 0; t < trace.T(); ++t) {
    const RoundRecord& rec = trace.rounds[t];
    validate_profile(instance, rec.m);
    if (rec.value.size() != instance.n || rec.spend.size() != instance.n) throw InputError("trace row width mismatch");
    for (std::size_t i = 0; i < instance.n; ++i) {
      if (rec.value[i] != value_obtained(instance, rec.outcome, i) || rec.spend[i] != spend(rec.outcome, i)) {
        throw InputError("round " + std::to_string(t + 1) + " value or spend does not match its outcome");
      }
      cv[i] += rec.value[i];
      cs[i] += rec.spend[i];
      if (trace.cum_value[t][i] != cv[i] || trace.cum_spend[t][i] != cs[i]) {
        throw InputError("running sums are not prefix-consistent at round " + std::to_string(t + 1));
      }
    }
    if (auto bad = round_violation(instance, rec); bad && !v.violated) {
      v.violated = bad->first;
      v.round = t;
      v.detail = "round " + std::to_string(t + 1) + ": " + bad->second;
    }
  }
  const Rational T(static_cast<unsigned long>(trace.T()));
  v.required_beta = 0;
  for (std::size_t i = 0; i < instance.n; ++i) {
    Rational d = (instance.ros_targets[i] * cs[i] - cv[i]) / T;
    d.canonicalize();
    v.required_beta = max(v.required_beta, d);
    v.deficit.push_back(std::move(d));
  }
  if (v.violated) return v;
  for (std::size_t i = 0; i < instance.n; ++i) {
    if (v.deficit[i] > beta) {
      v.violated = Condition::ros;
      v.detail = "bidder " + std::to_string(i) + " average deficit " + show(v.deficit[i]) + " exceeds beta " + show(beta);
      return v;
    }
  }
  v.accepted = true;
  return v;
}

std::vector<Rational> default_s_grid() {
  return {Rational(1, 100), Rational(1, 20), Rational(1, 10), Rational(1, 4), Rational(1, 2), Rational(1)};
}

std::vector<Rational> default_c_grid() {
  return {Rational(1, 8), Rational(1, 4), Rational(1, 2), Rational(1), Rational(2), Rational(4), Rational(8),
          Rational(16)};
}

ResponsiveVerdict check_responsive(const Instance& instance, const SequenceTrace& trace,
                                   const ResponsiveParams& params) {
  return responsive_impl(instance, trace, params, &scan_linear);
}

ResponsiveVerdict check_responsive_naive(const Instance& instance, const SequenceTrace& trace,
                                         const ResponsiveParams& params) {
  return responsive_impl(instance, trace, params, &scan_naive);
}

std::optional<Rational> largest_responsive_c(const Instance& instance, const SequenceTrace& trace,
                                             ResponsiveParams params, const std::vector<Rational>& c_grid) {
  std::vector<Rational> grid = c_grid;
  std::sort(grid.begin(), grid.end(), std::greater<>());
  for (const Rational& c : grid) {
    params.c = c;
    if (check_responsive(instance, trace, params).accepted) return c;
  }
  return std::nullopt;
}

PsiVerdict verify_psi_constants(const UpdateRule& rule, const std::vector<Rational>& s_samples) {
  PsiVerdict v;
  v.c = rule.constant();
  std::ostringstream why;
  std::vector<Rational> below{Rational(0), Rational(1, 2), Rational(999, 1000)};
  Rational prev = rule.m_safe;
  std::vector<Rational> sorted = s_samples;
  std::sort(sorted.begin(), sorted.end());
  for (const Rational& s : sorted) {
    if (s <= 0) throw ParameterError("s samples must be positive");
    if (s < 1) below.push_back(1 - s);
    const Rational out = rule(Extended(1 + s));
    const Rational bound = min(rule.cap, (1 + v.c * s) * rule.m_safe);
    if (out < bound) why << "psi(1+" << to_string(s) << ") = " << to_decimal(out) << " < " << to_decimal(bound) << "; ";
    if (out < prev || out > rule.cap) why << "psi leaves [m_safe, cap] or decreases at s = " << to_string(s) << "; ";
    prev = out;
  }
  for (const Rational& x : below) {
    if (rule(Extended(x)) != rule.m_safe) why << "psi(" << to_string(x) << ") differs from m_safe; ";
  }
  v.detail = why.str();
  v.accepted = v.detail.empty();
  return v;
}

TGoodReport tgood_fraction(const CompiledInstance& compiled, const SequenceTrace& trace, const Rational& lambda) {
  if (compiled.vertices.empty() || compiled.alphabet == 0) throw InputError("compiled instance has no assignment roles");
  if (trace.T() == 0) throw InputError("trace has no rounds");
  TGoodReport rep;
  const Rational M = compiled.instance.cap;
  const Rational K = parse_rational(compiled.param("K"));
  const Rational S(static_cast<unsigned long>(compiled.alphabet));
  rep.threshold = lambda * M * S / K + 1;
  std::vector<std::vector<std::size_t>> ids(compiled.vertices.size());
  for (std::size_t v = 0; v < compiled.vertices.size(); ++v) {
    for (std::size_t s = 0; s < compiled.alphabet; ++s) {
      ids[v].push_back(compiled.bidder("assign:" + compiled.vertices[v] + ":" + std::to_string(s)));
    }
  }
  std::vector<std::size_t> good(ids.size(), 0);
  std::size_t all_good = 0;
  for (const auto& rec : trace.rounds) {
    bool every = true;
    for (std::size_t v = 0; v < ids.size(); ++v) {
      std::vector<Rational> ms;
      for (std::size_t b : ids[v]) ms.push_back(rec.m[b]);
      std::sort(ms.begin(), ms.end(), std::greater<>());
      const bool ok = ms.size() < 2 || ms[1] <= rep.threshold;
      good[v] += ok;
      every = every && ok;
    }
    all_good += every;
  }
  const Rational T(static_cast<unsigned long>(trace.T()));
  for (std::size_t g : good) rep.per_variable.push_back(Rational(static_cast<unsigned long>(g)) / T);
  rep.global = Rational(static_cast<unsigned long>(all_good)) / T;
  return rep;
}

AverageMetrics average_metrics(const Instance& instance, const SequenceTrace& trace, const CompiledInstance* compiled) {
  if (trace.T() == 0) throw InputError("trace has no rounds");
  AverageMetrics out;
  struct Clause {
    std::size_t bidder;
    std::optional<std::size_t> own_item, incumbent_item;
  };
  std::vector<Clause> clauses;
  if (compiled) {
    for (const auto& [role, b] : compiled->bidder_roles) {
      if (role.rfind("clause:", 0) != 0) continue;
      const std::string key = role.substr(7);
      Clause c{b, std::nullopt, std::nullopt};
      if (auto it = compiled->item_roles.find(role); it != compiled->item_roles.end()) c.own_item = it->second;
      if (auto it = compiled->item_roles.find("incumbent:" + key); it != compiled->item_roles.end()) {
        c.incumbent_item = it->second;
      }
      clauses.push_back(c);
    }
    std::sort(clauses.begin(), clauses.end(), [](const Clause& a, const Clause& b) { return a.bidder < b.bidder; });
  }
  out.capture.assign(clauses.size(), Rational(0));
  out.clause_price.assign(clauses.size(), Rational(0));
  for (const auto& rec : trace.rounds) {
    out.welfare += liquid_welfare(instance, rec.outcome);
    out.revenue += revenue(rec.outcome);
    for (std::size_t c = 0; c < clauses.size(); ++c) {
      if (clauses[c].incumbent_item) out.capture[c] += rec.outcome.allocation(clauses[c].bidder, *clauses[c].incumbent_item);
      if (clauses[c].own_item) out.clause_price[c] += rec.outcome.prices[*clauses[c].own_item];
    }
  }
  const Rational T(static_cast<unsigned long>(trace.T()));
  out.welfare /= T;
  out.revenue /= T;
  for (auto& x : out.capture) x /= T;
  for (auto& x : out.clause_price) x /= T;
  return out;
}

}  // namespace autobid
