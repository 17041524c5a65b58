#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "autobid/io.hpp"
#include "autobid/learning.hpp"
#include "autobid_cli/cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <sstream>

using namespace autobid;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

struct TempDir {
  fs::path path;
  TempDir() : path(fs::temp_directory_path() / ("autobid_cli_" + std::to_string(std::rand()))) {
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string file(const std::string& name, const std::string& contents = "") const {
    const std::string p = (path / name).string();
    if (!contents.empty()) write_file_atomic(p, contents);
    return p;
  }
};

const char* kTwoOnOne = R"({"n":2,"k":1,"cap":"2","values":[["1"],["1"]]})";
const char* kLabelCover = R"({"V1":["a"],"V2":["b"],"sigma":2,"edges":[["a","b",[0,1]]]})";

}  // namespace

TEST_CASE("verify exit codes") {
  TempDir d;
  const std::string inst = d.file("inst.json", kTwoOnOne);
  const std::string good = d.file("good.json", R"({"m":["2","1"]})");
  const std::string bad = d.file("bad.json", R"({"m":["2","2"]})");
  Run r = run({"verify", inst, "--profile", good});
  CHECK(r.code == cli::kAccept);
  CHECK(r.out.find("verdict: accepted") != std::string::npos);
  r = run({"verify", inst, "--profile", bad});
  CHECK(r.code == cli::kReject);
  CHECK(r.out.find("violated: ros") != std::string::npos);
  CHECK(run({"verify", d.file("missing.json"), "--profile", good}).code == cli::kInputError);
  CHECK(run({"verify", d.file("broken.json", "{"), "--profile", good}).code == cli::kInputError);
  CHECK(run({"verify", inst, "--profile", good, "--beta", "2"}).code == cli::kParameterError);
  CHECK(run({"verify", inst}).code == cli::kParameterError);
  CHECK(run({"verify", inst, "--profile", good, "--bogus"}).code == cli::kParameterError);
  CHECK(run({}).code == cli::kParameterError);
}

TEST_CASE("search budget exit code") {
  TempDir d;
  const std::string inst = d.file("inst.json", kTwoOnOne);
  CHECK(run({"search", inst, "--grid", "linear:1/2"}).code == cli::kAccept);
  setenv("AUTOBID_BUDGET", "1", 1);
  const Run r = run({"search", inst, "--grid", "linear:1/8"});
  unsetenv("AUTOBID_BUDGET");
  CHECK(r.code == cli::kBudgetError);
  CHECK(run({"search", inst, "--grid", "spiral:3"}).code == cli::kParameterError);
}

TEST_CASE("compile is deterministic and mode sizes differ by the edge count") {
  TempDir d;
  const std::string lc = d.file("lc.json", kLabelCover);
  const std::string a = d.file("a.json"), b = d.file("b.json"), w = d.file("w.json");
  REQUIRE(run({"compile", lc, "--out", a}).code == cli::kAccept);
  REQUIRE(run({"compile", lc, "--out", b}).code == cli::kAccept);
  CHECK(read_file(a) == read_file(b));
  REQUIRE(run({"compile", lc, "--objective", "welfare", "--out", w}).code == cli::kAccept);
  const CompiledInstance rev = compiled_from_json(read_file(a));
  const CompiledInstance wel = compiled_from_json(read_file(w));
  CHECK(wel.instance.n - rev.instance.n == 1);
  CHECK(wel.instance.k - rev.instance.k == 1);
  const Run echo = run({"compile", lc, "--epsilon", "1/10", "--delta", "1/4", "--out", a});
  CHECK(echo.out.find("# M = 22/5") != std::string::npos);
  CHECK(run({"compile", lc, "--delta", "11/20", "--reserves", "expand", "--out", a}).code == cli::kParameterError);
  CHECK(run({"compile", lc, "--objective", "profit"}).code == cli::kParameterError);
}

TEST_CASE("compile without --out writes JSON to stdout") {
  TempDir d;
  const Run r = run({"compile", d.file("lc.json", kLabelCover)});
  REQUIRE(r.code == cli::kAccept);
  CHECK(is_compiled_json(r.out));
  CHECK(r.err.find("# epsilon") != std::string::npos);
}

TEST_CASE("simulate then verify the trace at its own beta") {
  TempDir d;
  const std::string inst = d.file("inst.json", kTwoOnOne);
  const std::string trace = d.file("trace.csv");
  const Run sim = run({"simulate", inst, "--rounds", "40", "--rule", "step", "--out", trace});
  REQUIRE(sim.code == cli::kAccept);
  CHECK(sim.out.find("m_safe[0] = 1") != std::string::npos);
  const Instance parsed = instance_from_json(kTwoOnOne);
  const SequenceTrace tr = trace_from_csv(parsed, read_file(trace));
  const Rational beta = check_admissible(parsed, tr, Rational(0)).required_beta;
  REQUIRE(sgn(beta) > 0);
  // beta * T is a constant c', so beta = c'/T.
  const Rational c_prime = beta * 40;
  CHECK(run({"verify", inst, "--trace", trace, "--beta", to_string(c_prime / 40)}).code == cli::kAccept);
  CHECK(run({"verify", inst, "--trace", trace, "--beta", to_string(c_prime / 80)}).code == cli::kReject);
  const Run an = run({"analyze", inst, "--trace", trace});
  CHECK(an.code == cli::kAccept);
  CHECK(an.out.find("responsive c:") != std::string::npos);
  CHECK(run({"simulate", inst, "--rounds", "5", "--rule", "linear"}).code == cli::kParameterError);
  CHECK(run({"analyze", inst}).code == cli::kParameterError);
}

TEST_CASE("cover CSP compile and simulate") {
  TempDir d;
  const std::string csp = d.file("csp.json", R"({"variables":1,"sigma":2,"clauses":[[[0,0]]]})");
  const std::string out = d.file("c.json");
  REQUIRE(run({"compile", csp, "--out", out}).code == cli::kAccept);
  const CompiledInstance c = compiled_from_json(read_file(out));
  CHECK(c.instance.n == 3);
  CHECK(c.instance.k == 4);
  const Run sim = run({"simulate", out, "--rounds", "20"});
  CHECK(sim.code == cli::kAccept);
  CHECK(sim.out.find("tgood global:") != std::string::npos);
}

TEST_CASE("single bidder search has one row and T=1 matches static clearing") {
  TempDir d;
  const std::string one = R"({"n":1,"k":1,"cap":"2","values":[["1"]],"reserves":["1/2"]})";
  const std::string inst = d.file("one.json", one);
  const Run s = run({"search", inst});
  CHECK(s.code == cli::kAccept);
  CHECK(s.out.find("accepted: 1\n") != std::string::npos);
  const std::string trace = d.file("t.csv");
  REQUIRE(run({"simulate", inst, "--rounds", "1", "--out", trace}).code == cli::kAccept);
  const Instance parsed = instance_from_json(one);
  const SequenceTrace tr = trace_from_csv(parsed, read_file(trace));
  REQUIRE(tr.T() == 1);
  const Outcome o = allocate(parsed, tr.rounds[0].m);
  CHECK(tr.rounds[0].outcome.allocation == o.allocation);
  CHECK(tr.rounds[0].outcome.prices == o.prices);
  CHECK(tr.rounds[0].spend[0] == Rational(1, 2));
}
