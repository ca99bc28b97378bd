#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include <json.hpp>

#include "trajlens/corpus.hpp"
#include "trajlens/dp_values.hpp"
#include "trajlens/report_io.hpp"
#include "trajlens/version.hpp"

using namespace trajlens;
using nlohmann::json;

namespace {

struct RunResult {
  int code = -1;
  std::string output;
};

// Runs the installed binary with stdout captured; stderr is folded in so
// error messages are assertable.
RunResult run_cli(const std::string& args) {
  std::string cmd = std::string(TRAJLENS_CLI_PATH) + " " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  RunResult r;
  char buf[4096];
  size_t got;
  while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) r.output.append(buf, got);
  int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

TEST_CASE("version and corpus listing") {
  RunResult v = run_cli("--version");
  CHECK(v.code == 0);
  CHECK(v.output.find(kVersion) != std::string::npos);

  RunResult list = run_cli("corpus list");
  CHECK(list.code == 0);
  for (const std::string& name : corpus_names())
    CHECK(list.output.find(name) != std::string::npos);
}

TEST_CASE("emitted corpus model solves identically to the library") {
  const char* model_path = "/tmp/trajlens_cli_ls3.json";
  RunResult emit = run_cli(std::string("corpus emit ls-nonregular --param K=3 --out ") +
                           model_path);
  REQUIRE(emit.code == 0);

  RunResult solved =
      run_cli(std::string("solve --model ") + model_path + " --horizon 6 --format csv");
  REQUIRE(solved.code == 0);

  CorpusEntry e = ls_nonregular(3);
  ValueTable t = finite_values(e.dp(), 6);
  std::vector<std::vector<double>> values_by_n;
  for (int n = 1; n <= 6; ++n) values_by_n.push_back(t.values_at(n));
  CHECK(solved.output == values_report_csv(state_ids(e.dp()), values_by_n));

  // Solving the corpus entry by name gives the same bytes.
  RunResult by_name =
      run_cli("solve --corpus ls-nonregular --param K=3 --horizon 6 --format csv");
  REQUIRE(by_name.code == 0);
  CHECK(by_name.output == solved.output);
  std::remove(model_path);
}

TEST_CASE("verdict exit codes distinguish holds from violated") {
  RunResult holds = run_cli(
      "check-p --corpus two-state-chain --epsilon 0.05 --horizons 50,100 --grid 20");
  CHECK(holds.code == 0);
  json doc = json::parse(holds.output);
  CHECK(doc["verdict"] == "HOLDS");
  CHECK(doc["n0"] == 50);

  RunResult violated = run_cli(
      "check-p --corpus ls-nonregular --epsilon 0.05 --horizons 60,80,100 "
      "--starts a1 --reference analytic --grid 20");
  CHECK(violated.code == 2);
  json vdoc = json::parse(violated.output);
  CHECK(vdoc["verdict"] == "VIOLATED");
  CHECK(vdoc["witness"].is_object());

  // Byte-identical on repeat runs.
  RunResult again = run_cli(
      "check-p --corpus ls-nonregular --epsilon 0.05 --horizons 60,80,100 "
      "--starts a1 --reference analytic --grid 20");
  CHECK(again.output == violated.output);
  CHECK(again.code == 2);
}

TEST_CASE("probe exit codes follow the evidence") {
  CHECK(run_cli("probe-uniform --corpus two-state-chain --state s0 "
                "--epsilon 0.05 --N 20 --Nmax 100")
            .code == 0);
  CHECK(run_cli("probe-uniform --corpus ls-nonregular --param K=10 --state a1 "
                "--epsilon 0.1 --N 10 --Nmax 20")
            .code == 2);
}

TEST_CASE("game solving reads a bare matrix file") {
  const char* path = "/tmp/trajlens_cli_game.json";
  {
    std::ofstream out(path);
    out << "[[3, 1], [0, 2]]\n";
  }
  RunResult r = run_cli(std::string("game-solve --matrix ") + path);
  REQUIRE(r.code == 0);
  json doc = json::parse(r.output);
  CHECK(doc["type"] == "game-solution");
  CHECK(std::abs(doc["value"].get<double>() - 1.5) <= 1e-12);
  CHECK(std::abs(doc["row_strategy"][0].get<double>() - 0.5) <= 1e-12);
  std::remove(path);
}

TEST_CASE("output lands in the requested file") {
  const char* path = "/tmp/trajlens_cli_out.json";
  RunResult direct = run_cli("solve --corpus three-cycle --horizon 6");
  REQUIRE(direct.code == 0);
  RunResult filed =
      run_cli(std::string("solve --corpus three-cycle --horizon 6 --out ") + path);
  REQUIRE(filed.code == 0);
  CHECK(filed.output.empty());
  CHECK(slurp(path) == direct.output);
  std::remove(path);
}

TEST_CASE("input mistakes exit with code one and an error line") {
  auto expect_error = [&](const std::string& args) {
    RunResult r = run_cli(args);
    INFO(args, " -> ", r.output);
    CHECK(r.code == 1);
  };
  expect_error("solve --model /nonexistent.json --horizon 4");
  expect_error("solve --corpus nonesuch --horizon 4");
  expect_error("solve --corpus three-cycle --horizon 4 --lambda 0.5");
  expect_error("solve --corpus three-cycle");
  expect_error("check-p --corpus three-cycle --horizons 4,8");  // no epsilon
  expect_error("check-p --corpus big-match --epsilon 0.05 --horizons 4");
  expect_error("enumerate --corpus three-cycle --horizon 4 --epsilon 0.1 --format csv");
  expect_error("corpus emit nonesuch");
  expect_error("frobnicate");
  expect_error("eval-profile --corpus big-match --profiles /nonexistent.json --stages 4");

  RunResult err = run_cli("solve --model /nonexistent.json --horizon 4");
  CHECK(err.output.find("error:") != std::string::npos);
}

TEST_CASE("enumerate lists the spine jumps in order") {
  RunResult r = run_cli(
      "enumerate --corpus ls-nonregular --param K=3 --start a1 --horizon 6 "
      "--epsilon 0.0001");
  REQUIRE(r.code == 0);
  json doc = json::parse(r.output);
  CHECK(doc["count"] == 1);
  CHECK(doc["truncated"] == false);
  REQUIRE(doc["plays"].size() == 1);
  CHECK(doc["plays"][0]["total"] == 3.0);
  CHECK(doc["plays"][0]["states"][0] == "a1");
}
