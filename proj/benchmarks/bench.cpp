#include "autobid/auction.hpp"
#include "autobid/cover.hpp"
#include "autobid/equilibrium.hpp"
#include "autobid/gadgets.hpp"
#include "autobid/learning.hpp"

#include <benchmark/benchmark.h>

#include <random>

using namespace autobid;

namespace {

Rational frac(long p, long q) {
  Rational r(p, q);
  r.canonicalize();
  return r;
}

Instance random_instance(std::size_t n, std::size_t k, unsigned seed) {
  std::mt19937_64 rng(seed);
  Instance inst = Instance::make(n, k, Rational(3));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < k; ++j) inst.values(i, j) = frac(static_cast<long>(rng() % 9), 4);
  }
  return inst;
}

Profile random_profile(const Instance& inst, unsigned seed) {
  std::mt19937_64 rng(seed);
  Profile m;
  for (std::size_t i = 0; i < inst.n; ++i) m.push_back(frac(4 + static_cast<long>(rng() % 9), 4));
  return m;
}

LabelCover one_edge() {
  LabelCover lc;
  lc.left = {"a"};
  lc.right = {"b"};
  lc.alphabet = 2;
  lc.edges = {{0, 0, {0, 1}}};
  return lc;
}

}  // namespace

static void BM_Clear(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const Instance inst = random_instance(n, n, 1);
  const Profile m = random_profile(inst, 2);
  for (auto _ : state) benchmark::DoNotOptimize(allocate(inst, m));
}
BENCHMARK(BM_Clear)->Arg(4)->Arg(16)->Arg(64);

static void BM_CheckEquilibrium(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const Instance inst = random_instance(n, n, 3);
  const Profile m = random_profile(inst, 4);
  for (auto _ : state) benchmark::DoNotOptimize(check_equilibrium(inst, m));
}
BENCHMARK(BM_CheckEquilibrium)->Arg(4)->Arg(8)->Arg(16);

static void BM_GridSearchRandom(benchmark::State& state) {
  const Instance inst = random_instance(3, 3, 5);
  const GridSpec g = uniform_grid(inst, linear_grid(Rational(3), frac(1, 4)));
  for (auto _ : state) benchmark::DoNotOptimize(grid_search_equilibria(inst, g));
}
BENCHMARK(BM_GridSearchRandom)->Unit(benchmark::kMillisecond);

static void BM_GridSearchCompiled(benchmark::State& state) {
  const CompiledInstance c = compile(one_edge(), derive_params(frac(1, 10), frac(1, 4), 2));
  const GridSpec g = structural_grid(c);
  for (auto _ : state) benchmark::DoNotOptimize(grid_search_equilibria(c.instance, g));
}
BENCHMARK(BM_GridSearchCompiled)->Unit(benchmark::kMillisecond);

static void BM_Dynamics(benchmark::State& state) {
  CoverCSP csp;
  csp.variables = 2;
  csp.alphabet = 2;
  csp.clauses = {{{0, 0}}, {{1, 1}}, {{0, 1}, {1, 0}}};
  const LearningParams p = revenue_learning_params(frac(1, 10), frac(1, 10), csp);
  const CompiledInstance c = compile_cover(csp, p);
  const auto rules = uniform_rules(c.instance, UpdateRule::Kind::step, Rational(1), Rational(0));
  const auto T = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(run_dynamics(c.instance, rules, T));
}
BENCHMARK(BM_Dynamics)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);

static void BM_Responsive(benchmark::State& state) {
  Instance inst = random_instance(3, 3, 7);
  const auto rules = uniform_rules(inst, UpdateRule::Kind::poly, Rational(2), frac(1, 10));
  const SequenceTrace tr = run_dynamics(inst, rules, static_cast<std::size_t>(state.range(0)));
  ResponsiveParams p;
  p.beta = Rational(1, 2);
  p.mu = frac(1, 10);
  p.s_grid = default_s_grid();
  for (auto _ : state) benchmark::DoNotOptimize(check_responsive(inst, tr, p));
}
BENCHMARK(BM_Responsive)->Arg(200)->Arg(2000)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
