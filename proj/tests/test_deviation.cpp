#include <doctest.h>

#include <cmath>

#include "trajlens/corpus.hpp"
#include "trajlens/deviation.hpp"
#include "trajlens/dp_values.hpp"
#include "trajlens/errors.hpp"
#include "trajlens/trajectory.hpp"

using namespace trajlens;

TEST_CASE("uniform grid endpoints and spacing") {
  std::vector<double> g = uniform_grid(4);
  CHECK(g == std::vector<double>{0.0, 0.25, 0.5, 0.75, 1.0});
}

TEST_CASE("constant stream deviates by at most one stage of payoff") {
  // Payoffs all c with v_ref = c: D(m/n) = 0 at every breakpoint and the
  // infimum is the left-limit -c/n.
  DpModel m = DpModel::create({{"c", 0.25, {0}}});
  Play play = optimal_play(m, 0, 8);
  DeviationProfile d = deviation_profile(play, 0.25, uniform_grid(8));
  for (double x : d.deviation) CHECK(std::abs(x) <= 0.25 / 8 + 1e-15);
  CHECK(d.sup_dev == 0.0);
  CHECK(d.inf_dev == doctest::Approx(-0.25 / 8).epsilon(1e-12));
  for (int k = 0; k <= 8; ++k) CHECK(d.breakpoint(k) == 0.0);
}

TEST_CASE("deviation endpoints: D(0) = 0 and D(1) = mean - v_ref") {
  DpModel m = DpModel::create({{"s0", 0.0, {0, 1}}, {"s1", 1.0, {1}}});
  Play play = make_play(m, {0, 0, 1, 1});
  DeviationProfile d = deviation_profile(play, 0.75, uniform_grid(4));
  CHECK(d.at(0.0) == 0.0);
  CHECK(d.at(1.0) == doctest::Approx(2.0 / 4 - 0.75).epsilon(1e-15));
  CHECK(d.interval(0.0, 1.0) == d.at(1.0));
  CHECK(d.interval(0.25, 0.75) ==
        doctest::Approx(d.at(0.75) - d.at(0.25)).epsilon(1e-15));
}

TEST_CASE("midpoint dip of the jump play") {
  CorpusEntry e = ls_nonregular(50);
  const DpModel& m = e.dp();
  Play play = optimal_play(m, m.index_of("a1"), 100);
  DeviationProfile d = deviation_profile(play, 0.5, uniform_grid(100));
  // 50 zeros then 50 ones: flat until the midpoint, then climbing back.
  CHECK(d.at(0.5) == -0.25);
  CHECK(d.breakpoint(50) == -0.25);
  CHECK(d.at(1.0) == 0.0);
  CHECK(d.sup_dev == 0.0);
  // The infimum is approached just before stage 51 starts paying.
  CHECK(d.inf_dev == doctest::Approx(-0.255).epsilon(1e-12));
  CHECK(d.inf_t == doctest::Approx(0.51).epsilon(1e-12));
}

TEST_CASE("stage lookup survives decimal grid values") {
  // 0.3 * 10 is 2.9999... in binary; the nudged floor must still read
  // stage 3.
  DpModel m = DpModel::create({{"a", 0.0, {1}},
                               {"b", 0.0, {2}},
                               {"c", 1.0, {3}},
                               {"d", 0.0, {4}},
                               {"e", 0.0, {5}},
                               {"f", 0.0, {6}},
                               {"g", 0.0, {7}},
                               {"h", 0.0, {8}},
                               {"i", 0.0, {9}},
                               {"j", 0.0, {9}}});
  Play play = optimal_play(m, 0, 10);
  DeviationProfile d = deviation_profile(play, 0.0, uniform_grid(10));
  CHECK(d.at(0.3) == d.breakpoint(3));
  CHECK(d.at(0.3) == doctest::Approx(0.1).epsilon(1e-15));
  CHECK(d.at(0.2) == 0.0);
}

TEST_CASE("negative reference values flip which family attains extremes") {
  std::vector<double> prefix{0.0, -0.5, -1.0};  // two stages paying -1/2
  DeviationProfile d = deviation_profile_from_prefix(prefix, 0, -1.0, uniform_grid(2));
  // D(t) = S_[2t]/2 + t: attained values 0, 0.25, 0.5 at breakpoints and
  // right-side limits rise toward each next breakpoint.
  CHECK(d.breakpoint(0) == 0.0);
  CHECK(d.breakpoint(1) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(d.breakpoint(2) == doctest::Approx(0.5).epsilon(1e-15));
  // Between breakpoints D climbs with slope +1, so the supremum is the
  // left limit approaching t = 1: S_1/2 + 1 = 3/4, above every attained
  // breakpoint value.
  CHECK(d.sup_dev == doctest::Approx(0.75).epsilon(1e-12));
  CHECK(d.sup_t == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(d.inf_dev == 0.0);
}

TEST_CASE("profile construction rejects bad input") {
  CHECK_THROWS_AS(deviation_profile_from_prefix({0.0}, 0, 0.5, {0.0, 1.0}),
                  ModelError);
  CHECK_THROWS_AS(deviation_profile_from_prefix({0.0, 1.0}, 0, 0.5, {-0.1}),
                  ModelError);
  CHECK_THROWS_AS(deviation_profile_from_prefix({0.0, 1.0}, 0, 0.5, {1.1}),
                  ModelError);
}
