#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "autobid/cover.hpp"
#include "autobid/errors.hpp"
#include "autobid/learning.hpp"
#include "oracles.hpp"

#include <random>

using namespace autobid;

namespace {

Instance two_on_one() {
  Instance inst = Instance::make(2, 1, Rational(2));
  inst.values(0, 0) = 1;
  inst.values(1, 0) = 1;
  return inst;
}

Instance random_instance(std::mt19937_64& rng, const Rational& cap) {
  const std::size_t n = 1 + rng() % 3, k = 1 + rng() % 3;
  Instance inst = Instance::make(n, k, cap);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < k; ++j) inst.values(i, j) = oracle::frac(static_cast<long>(rng() % 5), 2);
  }
  for (std::size_t j = 0; j < k; ++j) inst.reserves[j] = (rng() % 3 == 0) ? Rational(1, 2) : Rational(0);
  return inst;
}

CoverCSP single_clause() {
  CoverCSP csp;
  csp.variables = 1;
  csp.alphabet = 2;
  csp.clauses = {{{0, 0}}};
  return csp;
}

}  // namespace

TEST_CASE("m_safe on a hand example") {
  Instance inst = Instance::make(2, 2, Rational(4));
  inst.values(0, 0) = 2;   // contested by bidder 1 at 3
  inst.values(1, 0) = 3;
  inst.values(0, 1) = 1;   // bidder 0 alone
  inst.values(1, 1) = 0;
  CHECK(domination_sup(inst, 0) == Rational(3, 2));
  CHECK(m_safe(inst, 0, Rational(1, 10)) == Rational(27, 20));
  // Bidder 1 wins item 0 only if 3 >= 4 * 2; the competing value 2 is below 3.
  CHECK(domination_sup(inst, 1) == Rational(2, 3));
  CHECK(m_safe(inst, 1, Rational(0)) == 1);
  const Instance alone = Instance::make(1, 1, Rational(5));
  CHECK(domination_sup(alone, 0) == 5);
}

TEST_CASE("m_safe dominates per the brute-force oracle") {
  std::mt19937_64 rng(21);
  const Rational cap(3);
  std::vector<Rational> opp;
  for (int x = 2; x <= 6; ++x) opp.push_back(oracle::frac(x, 2));
  int strict = 0;
  for (int t = 0; t < 200; ++t) {
    const Instance inst = random_instance(rng, cap);
    for (std::size_t i = 0; i < inst.n; ++i) {
      const Rational ms = m_safe(inst, i, Rational(1, 10));
      CHECK(ms >= 1);
      CHECK(ms <= cap);
      CHECK(oracle::dominates(inst, i, ms, opp));
      const Rational sup = domination_sup(inst, i);
      if (sup > 1 && sup < cap) {
        CHECK_FALSE(oracle::dominates(inst, i, sup, opp));
        ++strict;
      }
    }
  }
  CHECK(strict > 5);
}

TEST_CASE("clause bidder m_safe in welfare mode") {
  const LearningParams p = welfare_learning_params(Rational(1, 10), single_clause());
  const CompiledInstance c = compile_cover(single_clause(), p);
  const std::size_t clause = c.bidder("clause:c0");
  CHECK(m_safe(c.instance, clause, p.mu) == (1 - p.mu) * p.M / (1 + p.epsilon));
}

TEST_CASE("update rule shapes") {
  const Rational safe(3, 2), cap(20);
  const UpdateRule step = UpdateRule::step(safe, cap);
  CHECK(step(Extended(Rational(1, 2))) == safe);
  CHECK(step(Extended(Rational(1))) == cap);
  CHECK(step(Extended::infinity()) == cap);
  const UpdateRule poly = UpdateRule::poly(2, Rational(1), cap);
  CHECK(poly(Extended(Rational(1))) == 1);
  CHECK(poly(Extended(Rational(3, 2))) == Rational(9, 4));
  CHECK(poly(Extended(Rational(10))) == cap);
  const UpdateRule exp = UpdateRule::exp(Rational(1), safe, cap);
  const Rational e1 = exp(Extended(Rational(2)));
  CHECK(e1 >= safe * 2);
  CHECK(e1 <= safe * Rational(272, 100));
  CHECK(ceil_to(e1, kRuleQuantum) == e1);
  CHECK(exp(Extended(Rational(1))) == safe);
  CHECK(step.constant() == 1);
  CHECK(poly.constant() == 2);
  UpdateRule custom;
  custom.kind = UpdateRule::Kind::custom;
  custom.m_safe = safe;
  custom.cap = cap;
  CHECK_THROWS_AS(custom(Extended(Rational(1))), ParameterError);
  custom.custom = [](const Extended&) { return Rational(100); };
  CHECK(custom(Extended(Rational(1))) == cap);
  custom.param = Rational(3);
  CHECK(custom.constant() == 3);
  CHECK(parse_rule_kind("poly") == UpdateRule::Kind::poly);
  CHECK_THROWS_AS(parse_rule_kind("linear"), ParameterError);
}

TEST_CASE("property: rules are monotone and within [m_safe, cap]") {
  const Rational safe(5, 4), cap(6);
  std::vector<UpdateRule> rules{UpdateRule::step(safe, cap), UpdateRule::poly(3, safe, cap),
                                UpdateRule::exp(Rational(1, 2), safe, cap)};
  for (const auto& rule : rules) {
    Rational prev = rule(Extended(Rational(0)));
    for (int x = 1; x <= 80; ++x) {
      const Rational y = rule(Extended(oracle::frac(x, 16)));
      CHECK(y >= safe);
      CHECK(y <= cap);
      CHECK(y >= prev);
      prev = y;
    }
    CHECK(rule(Extended::infinity()) == cap);
    CHECK(verify_psi_constants(rule, default_s_grid()).accepted);
  }
  UpdateRule lazy;
  lazy.kind = UpdateRule::Kind::custom;
  lazy.m_safe = safe;
  lazy.cap = cap;
  lazy.custom = [&](const Extended&) { return safe; };
  CHECK_FALSE(verify_psi_constants(lazy, default_s_grid()).accepted);
}

TEST_CASE("single bidder under the step rule jumps to cap after one round") {
  Instance inst = Instance::make(1, 1, Rational(3));
  inst.values(0, 0) = 1;
  const auto rules = uniform_rules(inst, UpdateRule::Kind::step, Rational(1), Rational(2, 3));
  CHECK(rules[0].m_safe == 1);
  const SequenceTrace tr = run_dynamics(inst, rules, 5);
  CHECK(tr.rounds[0].m == Profile{Rational(1)});
  for (std::size_t t = 1; t < 5; ++t) CHECK(tr.rounds[t].m == Profile{Rational(3)});
  CHECK(tr.ratio(4, 0).is_infinite());
}

TEST_CASE("three rounds of step dynamics by hand") {
  const Instance inst = two_on_one();
  const auto rules = uniform_rules(inst, UpdateRule::Kind::step, Rational(1), Rational(0));
  CHECK(rules[0].m_safe == 1);
  const SequenceTrace tr = run_dynamics(inst, rules, 3);
  REQUIRE(tr.T() == 3);
  // Round 1: tie at 1, each pays 1/2 for 1/2. Ratio 1 sends both to cap.
  CHECK(tr.rounds[0].m == Profile{Rational(1), Rational(1)});
  CHECK(tr.rounds[0].spend[0] == Rational(1, 2));
  // Round 2: tie at 2, each pays 1 for 1/2. Ratio 2/3 sends both back.
  CHECK(tr.rounds[1].m == Profile{Rational(2), Rational(2)});
  CHECK(tr.rounds[1].spend[1] == 1);
  CHECK(tr.ratio(1, 0) == Extended(Rational(2, 3)));
  CHECK(tr.rounds[2].m == Profile{Rational(1), Rational(1)});
  CHECK(tr.cum_value[2][0] == Rational(3, 2));
  CHECK(tr.cum_spend[2][0] == 2);
  CHECK(make_trace(inst, {tr.rounds[0].m, tr.rounds[1].m, tr.rounds[2].m}).cum_spend == tr.cum_spend);
}

TEST_CASE("admissibility deficit is the time-average RoS shortfall") {
  const Instance inst = two_on_one();
  const auto rules = uniform_rules(inst, UpdateRule::Kind::step, Rational(1), Rational(0));
  const SequenceTrace tr = run_dynamics(inst, rules, 3);
  const AdmissibleVerdict v = check_admissible(inst, tr, Rational(1, 6));
  CHECK(v.accepted);
  CHECK(v.deficit == std::vector<Rational>{Rational(1, 6), Rational(1, 6)});
  CHECK(v.required_beta == Rational(1, 6));
  const AdmissibleVerdict w = check_admissible(inst, tr, Rational(1, 7));
  CHECK_FALSE(w.accepted);
  REQUIRE(w.violated);
  CHECK(*w.violated == Condition::ros);
}

TEST_CASE("admissibility rejects a tampered outcome") {
  const Instance inst = two_on_one();
  SequenceTrace tr = make_trace(inst, {{Rational(2), Rational(1)}});
  CHECK(check_admissible(inst, tr, Rational(0)).accepted);
  auto& rec = tr.rounds[0];
  rec.outcome.allocation(0, 0) = 0;
  rec.outcome.allocation(1, 0) = 1;
  CHECK_THROWS_AS(check_admissible(inst, tr, Rational(0)), InputError);
  rec.value = {Rational(0), Rational(1)};
  rec.spend = {Rational(0), rec.outcome.unit_price(1, 0)};
  tr.cum_value[0] = rec.value;
  tr.cum_spend[0] = rec.spend;
  const AdmissibleVerdict v = check_admissible(inst, tr, Rational(0));
  CHECK_FALSE(v.accepted);
  CHECK(v.violated == std::optional<Condition>(Condition::highest_bid));
  CHECK(v.round == std::optional<std::size_t>(0));
}

TEST_CASE("a bidder that never reacts to surplus is not responsive") {
  Instance inst = Instance::make(1, 1, Rational(3));
  inst.values(0, 0) = 1;
  const std::vector<Profile> stuck(40, Profile{Rational(1)});
  const SequenceTrace tr = make_trace(inst, stuck);
  ResponsiveParams p;
  p.mu = Rational(2, 3);
  p.s_grid = default_s_grid();
  const ResponsiveVerdict v = check_responsive(inst, tr, p);
  CHECK_FALSE(v.accepted);
  CHECK(v.violated == "reaction");
  CHECK(v.bidder == std::optional<std::size_t>(0));
  CHECK(check_responsive_naive(inst, tr, p).violated == "reaction");

  const SequenceTrace capped = make_trace(inst, std::vector<Profile>(40, Profile{Rational(3)}));
  CHECK(check_responsive(inst, capped, p).accepted);
  p.mu = 0;
  CHECK(check_responsive(inst, tr, p).violated == "safe-floor");
}

TEST_CASE("property: linear and naive responsiveness scans agree") {
  std::mt19937_64 rng(31);
  const std::vector<Rational> cs{Rational(1, 2), Rational(1), Rational(4)};
  int accepted = 0, rejected = 0;
  for (int t = 0; t < 120; ++t) {
    const Instance inst = random_instance(rng, Rational(2));
    const std::size_t T = 5 + rng() % 30;
    std::vector<Profile> seq;
    for (std::size_t r = 0; r < T; ++r) {
      Profile m;
      for (std::size_t i = 0; i < inst.n; ++i) m.push_back(oracle::frac(4 + static_cast<long>(rng() % 5), 4));
      seq.push_back(m);
    }
    const SequenceTrace tr = make_trace(inst, seq);
    ResponsiveParams p;
    p.alpha = (t % 2) ? Rational(1, 10) : Rational(0);
    p.beta = Rational(1, 2);
    p.mu = Rational(1, 4);
    p.c = cs[t % cs.size()];
    p.s_grid = default_s_grid();
    const ResponsiveVerdict fast = check_responsive(inst, tr, p);
    const ResponsiveVerdict slow = check_responsive_naive(inst, tr, p);
    CHECK(fast.accepted == slow.accepted);
    CHECK(fast.violated == slow.violated);
    CHECK(fast.bidder == slow.bidder);
    fast.accepted ? ++accepted : ++rejected;
  }
  CHECK(accepted > 0);
  CHECK(rejected > 0);
}

TEST_CASE("largest responsive c is monotone in the grid") {
  const Instance inst = two_on_one();
  const auto rules = uniform_rules(inst, UpdateRule::Kind::step, Rational(1), Rational(0));
  const SequenceTrace tr = run_dynamics(inst, rules, 60);
  ResponsiveParams p;
  p.beta = check_admissible(inst, tr, Rational(0)).required_beta;
  p.s_grid = default_s_grid();
  const auto c = largest_responsive_c(inst, tr, p, default_c_grid());
  REQUIRE(c);
  for (const auto& x : default_c_grid()) {
    p.c = x;
    CHECK(check_responsive(inst, tr, p).accepted == (x <= *c));
  }
}

TEST_CASE("tgood fraction of a trace pinned at 1") {
  const LearningParams p = revenue_learning_params(Rational(1, 10), Rational(1, 10), single_clause());
  const CompiledInstance c = compile_cover(single_clause(), p);
  const SequenceTrace tr = make_trace(c.instance, std::vector<Profile>(10, Profile(c.instance.n, Rational(1))));
  const TGoodReport rep = tgood_fraction(c, tr, p.lambda);
  CHECK(rep.threshold == p.lambda * p.M * 2 / p.K + 1);
  CHECK(rep.global == 1);
  CHECK(rep.per_variable == std::vector<Rational>{Rational(1)});
  Profile two_high(c.instance.n, Rational(1));
  two_high[c.bidder("assign:x0:0")] = p.M;
  two_high[c.bidder("assign:x0:1")] = p.M;
  const SequenceTrace bad = make_trace(c.instance, {two_high, Profile(c.instance.n, Rational(1))});
  CHECK(tgood_fraction(c, bad, p.lambda).global == Rational(1, 2));
}

TEST_CASE("average metrics over alternating rounds") {
  Instance inst = Instance::make(2, 1, Rational(6));
  inst.values(0, 0) = 1;
  inst.values(1, 0) = Rational(1, 2);
  const SequenceTrace tr = make_trace(inst, {{Rational(6), Rational(2)}, {Rational(6), Rational(6)}});
  const AverageMetrics a = average_metrics(inst, tr);
  CHECK(a.revenue == 2);
  CHECK(a.welfare == 1);
  CHECK(a.capture.empty());
}

TEST_CASE("revenue-mode cover compile and clause metrics") {
  const LearningParams p = revenue_learning_params(Rational(1, 10), Rational(1, 10), single_clause());
  const CompiledInstance c = compile_cover(single_clause(), p);
  CHECK(c.instance.n == 3);
  CHECK(c.instance.k == 4);
  const auto rules = uniform_rules(c.instance, UpdateRule::Kind::step, Rational(1), Rational(0));
  const SequenceTrace tr = run_dynamics(c.instance, rules, 50);
  const AverageMetrics a = average_metrics(c.instance, tr, &c);
  REQUIRE(a.clause_price.size() == 1);
  CHECK(a.clause_price[0] >= 0);
  CHECK(a.clause_price[0] <= 1);
}
