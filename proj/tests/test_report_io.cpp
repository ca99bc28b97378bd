#include <doctest.h>

#include <cstdlib>
#include <string>
#include <vector>

#include <json.hpp>

#include "trajlens/corpus.hpp"
#include "trajlens/hashing.hpp"
#include "trajlens/report_io.hpp"
#include "trajlens/trajectory.hpp"
#include "trajlens/version.hpp"

using namespace trajlens;
using nlohmann::json;

namespace {

Provenance test_prov() {
  Provenance p;
  p.tool_version = kVersion;
  p.command = "trajlens test";
  p.model_hash = hash_hex(fnv1a64(""));
  p.params = {{"epsilon", "0.05"}, {"grid", "4"}};
  return p;
}

json parse_report(const std::string& text) {
  REQUIRE(!text.empty());
  CHECK(text.back() == '\n');
  return json::parse(text);
}

void require_provenance(const json& doc) {
  REQUIRE(doc.contains("provenance"));
  const json& p = doc["provenance"];
  CHECK(p["tool"]["name"] == "trajlens");
  CHECK(p["tool"]["version"] == kVersion);
  CHECK(p.contains("command"));
  CHECK(p.contains("model_hash"));
  CHECK(p["params"].is_object());
}

}  // namespace

TEST_CASE("doubles render to the shortest exact decimal") {
  for (double v : {0.1, 1.0 / 3.0, 1e-9, 0.5, 1.0, -0.255, 0.0,
                   6.0 / 14.0, 1e300, -1.0 / 1024.0}) {
    std::string s = format_double(v);
    CHECK(std::strtod(s.c_str(), nullptr) == v);
  }
  CHECK(format_double(1.0) == "1");
  CHECK(format_double(0.5) == "0.5");
  CHECK(format_double(-0.255) == "-0.255");
  CHECK(format_double(1e-9) == "1e-09");
}

TEST_CASE("hashes print as 16 fixed hex digits") {
  CHECK(hash_hex(fnv1a64("")) == "cbf29ce484222325");
  CHECK(hash_hex(0) == "0000000000000000");
  CHECK(hash_hex(0xF) == "000000000000000f");
}

TEST_CASE("values reports carry one row per horizon and state") {
  std::vector<std::string> ids = {"a", "b"};
  std::vector<std::vector<double>> values = {{0.5, 1.0}, {0.75, 1.0}};

  CHECK(values_report_csv(ids, values) ==
        "n,state,value\n"
        "1,a,0.5\n"
        "1,b,1\n"
        "2,a,0.75\n"
        "2,b,1\n");

  json doc = parse_report(values_report_json(ids, values, test_prov()));
  CHECK(doc["type"] == "values");
  CHECK(doc["horizon"] == 2);
  REQUIRE(doc["rows"].size() == 4);
  CHECK(doc["rows"][0]["n"] == 1);
  CHECK(doc["rows"][0]["state"] == "a");
  CHECK(doc["rows"][0]["value"] == 0.5);
  CHECK(doc["provenance"]["params"]["epsilon"] == "0.05");
  require_provenance(doc);
}

TEST_CASE("discounted reports include the iteration certificate") {
  DiscountedResult r;
  r.values = {0.25};
  r.iterations = 12;
  r.residual = 1e-13;
  CHECK(discounted_report_csv({"x"}, 0.5, r) ==
        "lambda,state,value\n"
        "0.5,x,0.25\n");

  json doc = parse_report(discounted_report_json({"x"}, 0.5, r, test_prov()));
  CHECK(doc["type"] == "discounted-values");
  CHECK(doc["lambda"] == 0.5);
  CHECK(doc["iterations"] == 12);
  CHECK(doc["values"][0]["state"] == "x");
  require_provenance(doc);
}

TEST_CASE("check report CSV is bit-exact per grid point") {
  PReport rep;
  rep.kind = PReport::Kind::kAverage;
  rep.epsilon = 0.05;
  rep.grid = {0.0, 0.5, 1.0};
  CheckRow row;
  row.horizon = 6;
  row.state = 0;
  row.grid_dev = {0.0, -0.1, 0.2};
  row.pass = false;
  rep.rows = {row};

  CHECK(preport_to_csv(rep, {"s0", "s1"}) ==
        "horizon,state,t,deviation,epsilon,verdict\n"
        "6,s0,0,0,0.05,fail\n"
        "6,s0,0.5,-0.1,0.05,fail\n"
        "6,s0,1,0.2,0.05,fail\n");
}

TEST_CASE("average check JSON round trips through a real run") {
  CorpusEntry e = make_corpus_entry("two-state-chain");
  const DpModel& m = e.dp();
  PReport rep = check_property_P(m, 0.05, {6, 20}, uniform_grid(6), 1000);
  json doc = parse_report(preport_to_json(rep, state_ids(m), test_prov()));

  CHECK(doc["type"] == "p-report");
  CHECK(doc["kind"] == "average");
  CHECK(doc["verdict"] == "HOLDS");
  CHECK(doc["horizons"] == json({6, 20}));
  CHECK(!doc.contains("lambdas"));
  CHECK(doc.contains("n0"));
  CHECK(doc["witness"].is_null());
  REQUIRE(doc["rows"].size() == rep.rows.size());
  const json& r0 = doc["rows"][0];
  CHECK(r0["state"].is_string());
  CHECK(!r0.contains("lambda"));
  CHECK(r0["grid_deviation"].size() == rep.grid.size());
  require_provenance(doc);

  // CSV carries rows x grid lines plus the header.
  std::string csv = preport_to_csv(rep, state_ids(m));
  size_t lines = 0;
  for (char c : csv)
    if (c == '\n') ++lines;
  CHECK(lines == 1 + rep.rows.size() * rep.grid.size());
  CHECK(csv.rfind("horizon,state,t,deviation,epsilon,verdict\n", 0) == 0);
}

TEST_CASE("discounted check JSON includes discount columns and witness") {
  CorpusEntry e = make_corpus_entry("ls-nonregular", {{"K", 10}});
  const DpModel& m = e.dp();
  CheckOptions opts;
  opts.starts = {m.index_of("a1")};
  opts.reference = e.analytic_limit;
  PReport rep =
      check_property_Pprime(m, 0.05, {0.05}, uniform_grid(10), 1000, opts);
  json doc = parse_report(preport_to_json(rep, state_ids(m), test_prov()));

  CHECK(doc["type"] == "pprime-report");
  CHECK(doc["kind"] == "discounted");
  CHECK(doc["lambdas"] == json({0.05}));
  CHECK(doc.contains("coverage_margin"));
  REQUIRE(!doc["rows"].empty());
  CHECK(doc["rows"][0]["lambda"] == 0.05);
  if (doc["verdict"] == "VIOLATED") {
    REQUIRE(doc["witness"].is_object());
    CHECK(doc["witness"]["lambda"] == 0.05);
    CHECK(doc["witness"]["play"].is_array());
    CHECK(!doc.contains("lambda0"));
  } else {
    CHECK(doc.contains("lambda0"));
  }

  // The discounted CSV reports the effective truncation horizon.
  std::string csv = preport_to_csv(rep, state_ids(m));
  std::string first_field = csv.substr(csv.find('\n') + 1);
  first_field = first_field.substr(0, first_field.find(','));
  CHECK(first_field == std::to_string(effective_horizon(0.05, 0.05)));
}

TEST_CASE("play listings name states and record the threshold") {
  CorpusEntry e = ls_nonregular(3);
  const DpModel& m = e.dp();
  const int a1 = m.index_of("a1");
  EnumerationResult r = enumerate_eps_optimal_plays(m, a1, 6, 0.0, 100);
  ValueTable t = finite_values(m, 6);
  json doc = parse_report(
      plays_report_json(m, a1, 6, 0.0, t.total(6, a1), r, test_prov()));
  CHECK(doc["type"] == "plays");
  CHECK(doc["start"] == "a1");
  CHECK(doc["count"] == r.plays.size());
  REQUIRE(!doc["plays"].empty());
  // A play lists exactly its n visited states, starting at the start.
  CHECK(doc["plays"][0]["states"].size() == 6);
  CHECK(doc["plays"][0]["states"][0] == "a1");
  CHECK(doc["threshold"] == doc["optimal_total"]);
  require_provenance(doc);
}

TEST_CASE("game and probe and regularity reports parse back") {
  GameSolution s;
  s.value = 1.5;
  s.x = {0.5, 0.5};
  s.y = {0.25, 0.75};
  json game = parse_report(game_report_json(s, 2, 2, test_prov()));
  CHECK(game["type"] == "game-solution");
  CHECK(game["value"] == 1.5);
  CHECK(game["row_strategy"].size() == 2);
  require_provenance(game);

  CorpusEntry e = make_corpus_entry("two-state-chain");
  const DpModel& m = e.dp();
  UniformProbe probe = uniform_value_probe(m, 0, 0.05, 20, 100);
  json pr = parse_report(probe_report_json(state_ids(m), probe, test_prov()));
  CHECK(pr["type"] == "uniform-probe");
  CHECK(pr["state"] == "s0");
  CHECK(pr["ok"] == (probe.play_ok && probe.values_ok));
  CHECK((pr["first_fail_prefix"].is_null() ||
         pr["first_fail_prefix"].is_number()));
  require_provenance(pr);

  auto [estimate, report] = limit_value_estimate(m, 64, 1e-3);
  json reg = parse_report(
      regularity_report_json(state_ids(m), estimate, report, test_prov()));
  CHECK(reg["type"] == "regularity");
  REQUIRE(!reg["ladder"].empty());
  CHECK(reg["ladder"][0].contains("n_lo"));
  CHECK(reg["ladder"][0].contains("gap"));
  CHECK(reg["non_converged"].is_boolean());
  require_provenance(reg);
}

TEST_CASE("profile evaluation reports pair the stream with its deviation") {
  CorpusEntry e = big_match();
  const ZsgModel& g = e.zsg();
  std::vector<std::vector<double>> p1(3), p2(3);
  p1[static_cast<size_t>(g.index_of("bm"))] = {0.0, 1.0};
  p2[static_cast<size_t>(g.index_of("bm"))] = {0.5, 0.5};
  MarkovProfile sigma = stationary_profile(8, p1);
  MarkovProfile tau = stationary_profile(8, p2);
  std::vector<double> cum = eval_profile(g, sigma, tau, g.index_of("bm"), 8);
  DeviationProfile prof = expected_deviation_profile(
      g, sigma, tau, g.index_of("bm"), 8, 0.5, uniform_grid(4));

  std::vector<double> with_zero(1, 0.0);
  with_zero.insert(with_zero.end(), cum.begin(), cum.end());
  json doc = parse_report(
      profile_eval_report_json("bm", with_zero, prof, test_prov()));
  CHECK(doc["type"] == "profile-eval");
  CHECK(doc["start"] == "bm");
  CHECK(doc["stages"] == 8);
  CHECK(doc["cumulative"].size() == 9);
  CHECK(doc["deviation"]["grid"].size() == 5);
  CHECK(doc["deviation"]["values"].size() == 5);
  require_provenance(doc);
}
