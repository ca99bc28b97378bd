#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "oracles.hpp"
#include "trajlens/corpus.hpp"
#include "trajlens/dp_values.hpp"
#include "trajlens/errors.hpp"
#include "trajlens/trajectory.hpp"

using namespace trajlens;

namespace {

DpModel two_state() {
  return DpModel::create({{"s0", 0.0, {0, 1}}, {"s1", 1.0, {1}}});
}

std::vector<std::vector<int>> sequences(const std::vector<Play>& plays) {
  std::vector<std::vector<int>> out;
  for (const Play& p : plays) out.push_back(p.sequence);
  return out;
}

}  // namespace

TEST_CASE("greedy play reproduces the table total bit for bit") {
  std::mt19937 rng(7011);
  for (int trial = 0; trial < 30; ++trial) {
    DpModel m = oracles::random_model(rng, 2 + trial % 6, 3);
    ValueTable t = finite_values(m, 10);
    for (int s = 0; s < m.num_states(); ++s) {
      Play p = optimal_play(m, t, s, 10);
      CHECK(p.total() == t.total(10, s));
      CHECK(is_feasible(m, p));
    }
  }
}

TEST_CASE("greedy play on the spine jumps at the balance point") {
  CorpusEntry e = ls_nonregular(50);
  const DpModel& m = e.dp();
  Play p = optimal_play(m, m.index_of("a1"), 100);
  for (int k = 0; k < 50; ++k) CHECK(m.state(p.sequence[k]).payoff == 0.0);
  for (int k = 50; k < 100; ++k) CHECK(m.state(p.sequence[k]).payoff == 1.0);
  CHECK(p.sequence[50] == m.index_of("b50_1"));
  CHECK(p.total() == 50.0);
}

TEST_CASE("enumeration agrees with exhaustive search") {
  std::mt19937 rng(90210);
  for (int trial = 0; trial < 30; ++trial) {
    DpModel m = oracles::random_model(rng, 2 + trial % 4, 3);
    const int n = 6;
    ValueTable t = finite_values(m, n);
    for (double eps : {0.0, 0.1, 0.5}) {
      EnumerationResult got =
          enumerate_eps_optimal_plays(m, 0, n, eps, 1000000);
      std::vector<Play> want =
          oracles::plays_above(m, 0, n, t.total(n, 0) - n * eps);
      CHECK(!got.truncated);
      REQUIRE(got.plays.size() == want.size());
      CHECK(sequences(got.plays) == sequences(want));
    }
  }
}

TEST_CASE("enumeration order is lexicographic in successor choices") {
  DpModel m = two_state();
  EnumerationResult r = enumerate_eps_optimal_plays(m, 0, 4, 1.0, 100);
  // Threshold 3 - 4 = -1: every feasible play qualifies, in dictionary
  // order of the chosen indices.
  REQUIRE(r.plays.size() == 4);
  CHECK(r.plays[0].sequence == std::vector<int>{0, 0, 0, 0});
  CHECK(r.plays[1].sequence == std::vector<int>{0, 0, 0, 1});
  CHECK(r.plays[2].sequence == std::vector<int>{0, 0, 1, 1});
  CHECK(r.plays[3].sequence == std::vector<int>{0, 1, 1, 1});
}

TEST_CASE("enumeration limit semantics") {
  // Constant payoffs: every play is optimal; 2 choices per stage.
  DpModel m = DpModel::create({{"a", 0.5, {0, 1}}, {"b", 0.5, {0, 1}}});
  SUBCASE("cut mid-stream reports truncation") {
    EnumerationResult r = enumerate_eps_optimal_plays(m, 0, 5, 0.0, 5);
    CHECK(r.plays.size() == 5);
    CHECK(r.truncated);
  }
  SUBCASE("limit equal to the match count is not a truncation") {
    EnumerationResult r = enumerate_eps_optimal_plays(m, 0, 5, 0.0, 16);
    CHECK(r.plays.size() == 16);
    CHECK(!r.truncated);
  }
  SUBCASE("streaming variant sees the same plays") {
    ValueTable t = finite_values(m, 5);
    std::vector<Play> seen;
    bool truncated = for_each_eps_optimal_play(
        m, t, 0, 5, 0.0, 7, [&](const Play& p) { seen.push_back(p); });
    CHECK(truncated);
    EnumerationResult r = enumerate_eps_optimal_plays(m, 0, 5, 0.0, 7);
    CHECK(sequences(seen) == sequences(r.plays));
  }
}

TEST_CASE("enumeration input validation") {
  DpModel m = two_state();
  CHECK_THROWS_AS(enumerate_eps_optimal_plays(m, 0, 0, 0.1, 10), ModelError);
  CHECK_THROWS_AS(enumerate_eps_optimal_plays(m, 5, 3, 0.1, 10), ModelError);
  CHECK_THROWS_AS(enumerate_eps_optimal_plays(m, 0, 3, -0.1, 10), ModelError);
}

TEST_CASE("discounted stage count closed form") {
  CHECK(discounted_stage_count(0.5, 0.6) == 2);
  CHECK(discounted_stage_count(0.5, 0.0) == 0);
  CHECK(discounted_stage_count(0.5, 0.5) == 1);
  CHECK(discounted_stage_count(0.5, 0.75) == 2);   // boundary hit exactly
  CHECK(discounted_stage_count(0.5, 0.76) == 3);
  CHECK(discounted_stage_count(0.25, 0.4375) == 2);  // 1 - (3/4)^2
  CHECK_THROWS_AS(discounted_stage_count(0.5, 1.0), ModelError);
  CHECK_THROWS_AS(discounted_stage_count(0.5, -0.1), ModelError);
}

TEST_CASE("effective horizon: smallest depth with negligible tail") {
  // (1 - 0.05)^p <= 0.005 first at p = 104.
  CHECK(effective_horizon(0.05, 0.05) == 104);
  CHECK(std::pow(0.95, 104) <= 0.005);
  CHECK(std::pow(0.95, 103) > 0.005);
  CHECK_THROWS_AS(effective_horizon(1.0, 0.05), ModelError);
  CHECK_THROWS_AS(effective_horizon(0.0, 0.05), ModelError);
  CHECK_THROWS_AS(effective_horizon(1e-9, 0.05, 1000), EffectiveHorizonError);
}

TEST_CASE("average check holds on the regular chain") {
  DpModel m = two_state();
  PReport r = check_property_P(m, 0.05, {50, 100}, uniform_grid(100), 1000000);
  CHECK(r.verdict == "HOLDS");
  CHECK(r.n0 == 50);
  CHECK(!r.partial_coverage);
  CHECK(!r.witness.has_value());
  for (const CheckRow& row : r.rows) {
    CHECK(row.pass);
    CHECK(row.sup_dev <= 3 * 0.05 + 1e-12);
    CHECK(row.inf_dev >= -3 * 0.05 - 1e-12);
    CHECK(!row.truncated);
  }
}

TEST_CASE("average check flags the nonregular spine with a genuine witness") {
  CorpusEntry e = ls_nonregular(50);
  const DpModel& m = e.dp();
  CheckOptions opts;
  opts.starts = e.start_indices();
  opts.reference = e.analytic_limit;
  PReport r =
      check_property_P(m, 0.05, {60, 80, 100}, uniform_grid(100), 1000000, opts);
  CHECK(r.verdict == "VIOLATED");
  REQUIRE(r.witness.has_value());
  const Witness& w = *r.witness;
  CHECK(w.horizon == 100);
  CHECK(w.state == m.index_of("a1"));
  CHECK(std::abs(w.deviation) > 3 * 0.05);
  CHECK(std::abs(w.deviation) == doctest::Approx(0.25).epsilon(0.05));
  CHECK(is_feasible(m, w.play));
  // The witness play is eps-optimal: total within n*eps of the optimum.
  ValueTable t = finite_values(m, 100);
  CHECK(w.play.total() >= t.total(100, w.state) - 100 * 0.05 - 1e-9);
}

TEST_CASE("average check verdict comes from the largest horizon only") {
  // Short spine, cycle-oracle reference 0 (the default). Horizon 6
  // fails: the only 0.05-optimal play pays 3/6 at t=1. Horizon 60
  // passes: totals are capped at 3, so deviations lie in [0, 3/60].
  // The verdict must track the larger horizon.
  CorpusEntry e = ls_nonregular(3);
  const DpModel& m = e.dp();
  CheckOptions opts;
  opts.starts = {m.index_of("a1")};
  PReport r = check_property_P(m, 0.05, {6, 60}, uniform_grid(60), 1000000, opts);
  bool six_fails = false;
  for (const CheckRow& row : r.rows)
    if (row.horizon == 6 && !row.pass) six_fails = true;
  CHECK(six_fails);
  CHECK(r.verdict == "HOLDS");
  CHECK(r.n0 == 60);
}

TEST_CASE("check rows report play counts and respect the limit") {
  CorpusEntry e = ls_nonregular(50);
  const DpModel& m = e.dp();
  CheckOptions opts;
  opts.starts = e.start_indices();
  opts.reference = e.analytic_limit;
  PReport full =
      check_property_P(m, 0.05, {100}, uniform_grid(10), 1000000, opts);
  REQUIRE(full.rows.size() == 1);
  // Jumps at stages 45..50 are within 5 stages of the optimum.
  CHECK(full.rows[0].plays_examined == 6);
  CHECK(!full.partial_coverage);

  PReport cut = check_property_P(m, 0.05, {100}, uniform_grid(10), 3, opts);
  CHECK(cut.rows[0].plays_examined == 3);
  CHECK(cut.rows[0].truncated);
  CHECK(cut.partial_coverage);
}

TEST_CASE("discounted check holds on regular models") {
  DpModel m = two_state();
  PReport r = check_property_Pprime(m, 0.05, {0.05, 0.02, 0.01},
                                    uniform_grid(100), 1000000);
  CHECK(r.verdict == "HOLDS");
  CHECK(r.lambda0 == 0.05);
  CHECK(r.coverage_margin <= 0.005 + 1e-12);
  for (const CheckRow& row : r.rows) {
    CHECK(row.pass);
    CHECK(row.lambda > 0);
    CHECK(row.horizon == effective_horizon(row.lambda, 0.05));
  }
}

TEST_CASE("discounted check flags the nonregular spine") {
  // For a fixed truncation depth K, discounting eventually sees only the
  // zero sink: the discounted values at the spine collapse toward 0 while
  // the n-stage limit stays 1/2, so deviations at t = 1 blow past 3 eps.
  CorpusEntry e = ls_nonregular(50);
  const DpModel& m = e.dp();
  CheckOptions opts;
  opts.starts = e.start_indices();
  opts.reference = e.analytic_limit;
  PReport r = check_property_Pprime(m, 0.05, {0.05, 0.01}, uniform_grid(100),
                                    1000000, opts);
  CHECK(r.verdict == "VIOLATED");
  REQUIRE(r.witness.has_value());
  CHECK(r.witness->lambda == 0.01);
  CHECK(std::abs(r.witness->deviation) > 3 * 0.05);
  CHECK(is_feasible(m, r.witness->play));
}

TEST_CASE("discounted verdict comes from the smallest discount only") {
  // At lambda = 0.5 the effective horizon is 4 stages and the spine play
  // still pays nothing early: the large-discount row fails while small
  // discounts pass on the regular chain.
  DpModel m = two_state();
  PReport r = check_property_Pprime(m, 0.02, {0.9, 0.02}, uniform_grid(50),
                                    1000000);
  bool large_lambda_fails = false;
  for (const CheckRow& row : r.rows)
    if (row.lambda == 0.9 && !row.pass) large_lambda_fails = true;
  CHECK(large_lambda_fails);
  CHECK(r.verdict == "HOLDS");
  CHECK(r.lambda0 == 0.02);
}

TEST_CASE("uniform value probe") {
  SUBCASE("regular chain passes both conditions") {
    DpModel m = two_state();
    UniformProbe p = uniform_value_probe(m, 0, 0.05, 20, 100);
    CHECK(p.play_ok);
    CHECK(p.values_ok);
    CHECK(p.v_ref == doctest::Approx(99.0 / 100).epsilon(1e-12));
    CHECK(p.first_fail_play == -1);
    CHECK(p.first_fail_value == -1);
  }
  SUBCASE("truncated spine fails the play condition") {
    CorpusEntry e = ls_nonregular(10);
    const DpModel& m = e.dp();
    UniformProbe p = uniform_value_probe(m, m.index_of("a1"), 0.1, 10, 20);
    CHECK(!p.play_ok);
    CHECK(p.first_fail_play >= 10);
  }
  SUBCASE("absorbing states trivially have the uniform property") {
    DpModel m = DpModel::create({{"p", 0.75, {0}}});
    UniformProbe p = uniform_value_probe(m, 0, 0.01, 5, 50);
    CHECK(p.play_ok);
    CHECK(p.values_ok);
    CHECK(p.v_ref == 0.75);
  }
}

TEST_CASE("checkers are deterministic") {
  CorpusEntry e = ls_nonregular(20);
  CheckOptions opts;
  opts.starts = e.start_indices();
  opts.reference = e.analytic_limit;
  PReport a = check_property_P(e.dp(), 0.05, {40}, uniform_grid(40), 1000, opts);
  PReport b = check_property_P(e.dp(), 0.05, {40}, uniform_grid(40), 1000, opts);
  REQUIRE(a.rows.size() == b.rows.size());
  for (size_t i = 0; i < a.rows.size(); ++i) {
    CHECK(a.rows[i].sup_dev == b.rows[i].sup_dev);
    CHECK(a.rows[i].inf_dev == b.rows[i].inf_dev);
    CHECK(a.rows[i].grid_dev == b.rows[i].grid_dev);
    CHECK(a.rows[i].plays_examined == b.rows[i].plays_examined);
  }
  CHECK(a.verdict == b.verdict);
}
