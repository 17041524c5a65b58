#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "autobid/auction.hpp"
#include "autobid/equilibrium.hpp"
#include "autobid/errors.hpp"
#include "oracles.hpp"

#include <random>
#include <set>

using namespace autobid;

namespace {

Instance two_on_one() {
  Instance inst = Instance::make(2, 1, Rational(2));
  inst.values(0, 0) = 1;
  inst.values(1, 0) = 1;
  return inst;
}

Instance random_instance(std::mt19937_64& rng, std::size_t n, std::size_t k, const Rational& cap) {
  Instance inst = Instance::make(n, k, cap);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < k; ++j) inst.values(i, j) = oracle::frac(static_cast<long>(rng() % 5), 2);
  }
  return inst;
}

std::set<Profile> profiles_of(const SearchResult& r) {
  std::set<Profile> s;
  for (const auto& row : r.rows) s.insert(row.profile);
  return s;
}

}  // namespace

TEST_CASE("cap bidder paying its value is an equilibrium") {
  const Instance inst = two_on_one();
  const Verdict v = check_equilibrium(inst, {Rational(2), Rational(1)});
  REQUIRE(v.accepted);
  REQUIRE(v.witness);
  CHECK(v.witness->allocation(0, 0) == 1);
  CHECK(v.witness->prices[0] == 1);
  CHECK(v.residuals[0] == 0);
}

TEST_CASE("both bidders at cap violate RoS") {
  const Verdict v = check_equilibrium(two_on_one(), {Rational(2), Rational(2)});
  CHECK_FALSE(v.accepted);
  REQUIRE(v.violated);
  CHECK(condition_name(*v.violated) == "ros");
}

TEST_CASE("a slack bidder below cap violates maximal pacing") {
  Instance inst = Instance::make(1, 1, Rational(2));
  inst.values(0, 0) = 1;
  inst.reserves[0] = Rational(1, 2);
  const Verdict v = check_equilibrium(inst, {Rational(1)});
  CHECK_FALSE(v.accepted);
  REQUIRE(v.violated);
  CHECK(*v.violated == Condition::maximal_pacing);
  CHECK(check_equilibrium(inst, {Rational(2)}).accepted);
}

TEST_CASE("beta slack on an overpaying winner") {
  // A bids 198 against 100 and pays 100 for value 99.
  Instance inst = Instance::make(2, 1, Rational(2));
  inst.values(0, 0) = 99;
  inst.values(1, 0) = 50;
  const Profile m{Rational(2), Rational(2)};
  CHECK_FALSE(check_equilibrium(inst, m).accepted);
  CHECK(check_approx_equilibrium(inst, m, Rational(2, 100)).accepted);
  const Verdict tight = check_approx_equilibrium(inst, m, Rational(5, 1000));
  CHECK_FALSE(tight.accepted);
  REQUIRE(tight.violated);
  CHECK(*tight.violated == Condition::ros);
  CHECK_THROWS_AS(check_approx_equilibrium(inst, m, Rational(1)), ParameterError);
  CHECK_THROWS_AS(check_approx_equilibrium(inst, m, Rational(-1, 10)), ParameterError);
}

TEST_CASE("check_outcome flags each condition") {
  const Instance inst = two_on_one();
  const Profile m{Rational(2), Rational(1)};
  Outcome good = allocate(inst, m);
  CHECK(check_outcome(inst, m, good).accepted);

  Outcome partial = good;
  partial.allocation(0, 0) = Rational(1, 2);
  CHECK(*check_outcome(inst, m, partial).violated == Condition::full_allocation);

  Outcome loser = good;
  loser.allocation(0, 0) = 0;
  loser.allocation(1, 0) = 1;
  CHECK(*check_outcome(inst, m, loser).violated == Condition::highest_bid);

  Outcome cheap = good;
  cheap.unit_price(0, 0) = Rational(1, 2);
  CHECK(*check_outcome(inst, m, cheap).violated == Condition::second_price);
}

TEST_CASE("witness objectives bracket the allocation range") {
  // Tie at price 2. Bidder 0 is at cap and can fund any share of item 0
  // from its free item; bidder 1 bids its value.
  Instance inst = Instance::make(2, 2, Rational(2));
  inst.values(0, 0) = 1;
  inst.values(0, 1) = 1;
  inst.values(1, 0) = 2;
  const Profile m{Rational(2), Rational(1)};
  const Verdict lo = check_equilibrium(inst, m, WitnessObjective::min_welfare);
  const Verdict hi = check_equilibrium(inst, m, WitnessObjective::max_welfare);
  REQUIRE(lo.accepted);
  REQUIRE(hi.accepted);
  CHECK(liquid_welfare(inst, *lo.witness) == 2);
  CHECK(liquid_welfare(inst, *hi.witness) == 3);
}

TEST_CASE("equilibrium check agrees with vertex enumeration") {
  std::mt19937_64 rng(11);
  const std::vector<Rational> grid{Rational(1), Rational(3, 2), Rational(2), Rational(5, 2), Rational(3)};
  int accepted = 0;
  for (int t = 0; t < 300; ++t) {
    const Instance inst = random_instance(rng, 1 + rng() % 3, 1 + rng() % 2, Rational(3));
    Profile m;
    for (std::size_t i = 0; i < inst.n; ++i) m.push_back(grid[rng() % grid.size()]);
    const bool lp = check_equilibrium(inst, m).accepted;
    CHECK(lp == oracle::equilibrium_by_vertices(inst, m));
    accepted += lp;
  }
  CHECK(accepted > 10);
}

TEST_CASE("property: accepted witnesses pass check_outcome and scale invariance") {
  std::mt19937_64 rng(12);
  for (int t = 0; t < 200; ++t) {
    Instance inst = random_instance(rng, 1 + rng() % 3, 1 + rng() % 3, Rational(2));
    for (std::size_t j = 0; j < inst.k; ++j) inst.reserves[j] = (rng() % 2) ? Rational(1, 2) : Rational(0);
    Profile m;
    for (std::size_t i = 0; i < inst.n; ++i) m.push_back(oracle::frac(2 + static_cast<long>(rng() % 3), 2));
    const Verdict v = check_equilibrium(inst, m);
    if (v.accepted) CHECK(check_outcome(inst, m, *v.witness).accepted);
    CHECK(check_equilibrium(scale_instance(inst, Rational(5, 3)), m).accepted == v.accepted);
  }
}

TEST_CASE("grid helpers") {
  CHECK(linear_grid(Rational(2), Rational(1, 2)) == std::vector<Rational>{Rational(1), Rational(3, 2), Rational(2)});
  CHECK(linear_grid(Rational(2), Rational(2, 3), {Rational(6, 5)}) ==
        std::vector<Rational>{Rational(1), Rational(6, 5), Rational(5, 3), Rational(2)});
  const auto g = geometric_grid(Rational(8), 3);
  CHECK(g.front() == 1);
  CHECK(g.back() == 8);
  CHECK(std::is_sorted(g.begin(), g.end()));
  const GridSpec u = uniform_grid(two_on_one(), {Rational(1), Rational(2)}, Rational(1, 10));
  CHECK(u.candidates.size() == 2);
  CHECK(u.beta == Rational(1, 10));
}

TEST_CASE("pruned and exhaustive search find the same equilibria") {
  std::mt19937_64 rng(13);
  for (int t = 0; t < 60; ++t) {
    const Instance inst = random_instance(rng, 1 + rng() % 3, 1 + rng() % 3, Rational(2));
    const GridSpec g = uniform_grid(inst, linear_grid(Rational(2), Rational(1, 4)));
    SearchOptions full;
    full.prune = false;
    const SearchResult a = grid_search_equilibria(inst, g);
    const SearchResult b = grid_search_equilibria(inst, g, full);
    CHECK(profiles_of(a) == profiles_of(b));
    CHECK(b.leaves == static_cast<std::size_t>(b.grid_size));
    for (const auto& row : a.rows) CHECK(check_equilibrium(inst, row.profile).accepted);
  }
}

TEST_CASE("search reports extremes and respects the budget") {
  const Instance inst = two_on_one();
  SearchOptions o;
  o.witness_ranges = true;
  const SearchResult r = grid_search_equilibria(inst, uniform_grid(inst, {Rational(1), Rational(2)}), o);
  REQUIRE_FALSE(r.rows.empty());
  REQUIRE(r.best_welfare);
  for (const auto& row : r.rows) {
    REQUIRE(row.welfare_min);
    CHECK(*row.welfare_min <= *row.welfare_max);
  }
  SearchOptions tiny;
  tiny.budget = 1;
  CHECK_THROWS_AS(grid_search_equilibria(inst, uniform_grid(inst, linear_grid(Rational(2), Rational(1, 8))), tiny),
                  BudgetError);
}

TEST_CASE("poa report over equilibria") {
  const Instance inst = two_on_one();
  const SearchResult r = grid_search_equilibria(inst, uniform_grid(inst, {Rational(1), Rational(2)}));
  const PoaReport rep = poa_report(inst, r.rows);
  CHECK(rep.optimum == 1);
  CHECK(rep.poa_sample == Extended(Rational(1)));
  CHECK(rep.welfare_rho.size() == r.rows.size());
}

TEST_CASE("conservative extension") {
  Instance inner = Instance::make(1, 1, Rational(2));
  inner.values(0, 0) = 1;
  Instance outer = Instance::make(2, 2, Rational(2));
  outer.values(0, 0) = 1;
  outer.values(1, 0) = Rational(1, 4);
  outer.values(1, 1) = 1;
  outer.values(0, 1) = Rational(1, 4);
  CHECK(check_conservative_extension(inner, outer, {0}, {0}));
  outer.values(1, 0) = Rational(1, 2);
  CHECK_FALSE(check_conservative_extension(inner, outer, {0}, {0}));
  outer.values(1, 0) = Rational(1, 4);
  outer.values(0, 1) = Rational(1, 2);
  CHECK_FALSE(check_conservative_extension(inner, outer, {0}, {0}));
  CHECK_THROWS_AS(check_conservative_extension(inner, outer, {0, 1}, {0}), InputError);
  outer.values(0, 0) = 2;
  CHECK_THROWS_AS(check_conservative_extension(inner, outer, {0}, {0}), InputError);
}
