#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "autobid/cover.hpp"
#include "autobid/errors.hpp"
#include "autobid/io.hpp"
#include "autobid/learning.hpp"

#include <cstdio>
#include <filesystem>

using namespace autobid;

namespace {

LabelCover small_cover() {
  LabelCover lc;
  lc.left = {"a", "b"};
  lc.right = {"c"};
  lc.alphabet = 2;
  lc.edges = {{0, 0, {0, 1}}, {1, 0, {1, 1}}};
  return lc;
}

}  // namespace

TEST_CASE("label cover JSON round trip and alternate shapes") {
  const LabelCover lc = small_cover();
  const LabelCover back = label_cover_from_json(label_cover_to_json(lc));
  CHECK(back.left == lc.left);
  CHECK(back.right == lc.right);
  CHECK(back.alphabet == 2);
  REQUIRE(back.edges.size() == 2);
  CHECK(back.edges[1].projection == std::vector<std::size_t>{1, 1});
  const LabelCover counted = label_cover_from_json(R"({"V1":1,"V2":1,"sigma":2,"edges":[[0,0,[1,0]]]})");
  CHECK(counted.left.size() == 1);
  CHECK(counted.edges[0].projection == std::vector<std::size_t>{1, 0});
  CHECK_THROWS_AS(label_cover_from_json(R"({"V1":1,"V2":1,"sigma":2,"edges":[[0,3,[1,0]]]})"), InputError);
  const LabelCover named = label_cover_from_json(R"({"V1":["p","q"],"V2":["r"],"sigma":2,"edges":[["q","r",[0,0]]]})");
  CHECK(named.edges[0].u == 1);
  CHECK_THROWS_AS(label_cover_from_json(R"({"V1":["p"],"V2":["r"],"sigma":2,"edges":[["x","r",[0,0]]]})"), InputError);
}

TEST_CASE("cover CSP JSON round trip") {
  CoverCSP csp;
  csp.variables = 2;
  csp.alphabet = 3;
  csp.clauses = {{{0, 2}, {1, 0}}, {{1, 1}}};
  const CoverCSP back = cover_from_json(cover_to_json(csp));
  CHECK(back.variables == 2);
  CHECK(back.alphabet == 3);
  CHECK(back.clauses == csp.clauses);
  CHECK_THROWS_AS(cover_from_json(R"({"variables":1,"sigma":2,"clauses":[[[0,5]]]})"), InputError);
}

TEST_CASE("compiled instance JSON preserves roles, params and stages") {
  ReductionParams p = derive_params(Rational(1, 10), Rational(1, 4), 2);
  p.objective = Objective::welfare;
  const CompiledInstance c = compile(small_cover(), p);
  const std::string text = compiled_to_json(c);
  CHECK(is_compiled_json(text));
  CHECK_FALSE(is_compiled_json(instance_to_json(c.instance)));
  const CompiledInstance back = compiled_from_json(text);
  CHECK(back.instance == c.instance);
  CHECK(back.bidder_roles == c.bidder_roles);
  CHECK(back.item_roles == c.item_roles);
  CHECK(back.params == c.params);
  CHECK(back.vertices == c.vertices);
  CHECK(back.alphabet == c.alphabet);
  REQUIRE(back.stages.size() == c.stages.size());
  for (std::size_t s = 0; s < c.stages.size(); ++s) {
    CHECK(back.stages[s].name == c.stages[s].name);
    CHECK(back.stages[s].bidders == c.stages[s].bidders);
  }
  CHECK(compiled_to_json(back) == text);
  // A plain instance reader accepts compiled files too.
  CHECK(instance_from_json(text) == c.instance);
}

TEST_CASE("trace CSV round trip replays exactly") {
  Instance inst = Instance::make(2, 1, Rational(2));
  inst.values(0, 0) = 1;
  inst.values(1, 0) = Rational(2, 3);
  const auto rules = uniform_rules(inst, UpdateRule::Kind::poly, Rational(2), Rational(1, 10));
  const SequenceTrace tr = run_dynamics(inst, rules, 25);
  const std::string csv = trace_to_csv(tr, "rule=poly");
  CHECK(csv.rfind("# policy=", 0) == 0);
  const SequenceTrace back = trace_from_csv(inst, csv);
  REQUIRE(back.T() == tr.T());
  for (std::size_t t = 0; t < tr.T(); ++t) CHECK(back.rounds[t].m == tr.rounds[t].m);
  CHECK(back.cum_value == tr.cum_value);
  CHECK(back.cum_spend == tr.cum_spend);
  CHECK(trace_to_csv(back, "rule=poly") == csv);
}

TEST_CASE("trace CSV rejects inconsistent rows") {
  Instance inst = Instance::make(1, 1, Rational(2));
  inst.values(0, 0) = 1;
  inst.reserves[0] = Rational(1, 2);
  const SequenceTrace tr = make_trace(inst, {{Rational(1)}, {Rational(2)}});
  std::string csv = trace_to_csv(tr);
  const std::string good = ",1/2,";
  const auto pos = csv.find(good);
  REQUIRE(pos != std::string::npos);
  csv.replace(pos, good.size(), ",1/3,");
  CHECK_THROWS_AS(trace_from_csv(inst, csv), InputError);
  CHECK_THROWS_AS(trace_from_csv(inst, "garbage"), InputError);
  Instance other = Instance::make(2, 1, Rational(2));
  CHECK_THROWS_AS(trace_from_csv(other, trace_to_csv(tr)), InputError);
}

TEST_CASE("atomic file writes") {
  const auto dir = std::filesystem::temp_directory_path() / "autobid_io_test";
  std::filesystem::create_directories(dir);
  const std::string path = (dir / "x.json").string();
  write_file_atomic(path, "one");
  write_file_atomic(path, "two");
  CHECK(read_file(path) == "two");
  CHECK_THROWS_AS(read_file((dir / "missing").string()), InputError);
  std::filesystem::remove_all(dir);
}
