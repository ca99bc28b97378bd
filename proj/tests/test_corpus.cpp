#include <doctest.h>

#include <cmath>
#include <string>
#include <vector>

#include "trajlens/corpus.hpp"
#include "trajlens/dp_values.hpp"
#include "trajlens/errors.hpp"

using namespace trajlens;

TEST_CASE("every registry name builds a usable entry") {
  std::vector<std::string> names = corpus_names();
  REQUIRE(names.size() == 6);
  for (const std::string& name : names) {
    CorpusEntry e = make_corpus_entry(name);
    CHECK(e.name == name);
    CHECK(!e.notes.empty());
    CHECK(e.has_dp() != e.zsg_model.has_value());
    const int ns = e.has_dp() ? e.dp().num_states() : e.zsg().num_states();
    CHECK(static_cast<int>(e.analytic_limit.size()) == ns);
    REQUIRE(!e.start_ids.empty());
    for (int s : e.start_indices()) {
      CHECK(s >= 0);
      CHECK(s < ns);
    }
  }
}

TEST_CASE("entry accessors reject the wrong model kind") {
  CHECK_THROWS_AS(big_match().dp(), ModelError);
  CHECK_THROWS_AS(ls_nonregular(3).zsg(), ModelError);
}

TEST_CASE("spine family sizes and closed-form values") {
  // K spine states, chains of lengths 1..K, one sink.
  CHECK(ls_nonregular(3).dp().num_states() == 10);
  CHECK(make_corpus_entry("ls-nonregular").dp().num_states() == 1326);
  CHECK(make_corpus_entry("ls-nonregular", {{"K", 4}}).dp().num_states() ==
        4 + 10 + 1);

  CorpusEntry e = ls_nonregular(6);
  const DpModel& m = e.dp();
  const int a1 = m.index_of("a1");
  ValueTable t = finite_values(m, 14);
  for (int n = 1; n <= 14; ++n)
    CHECK(t.value(n, a1) == e.vn_exact(a1, n));
  CHECK(e.expected_p_verdict == "VIOLATED");
  // Even horizons up to 2K split evenly between spine and chain.
  CHECK(e.vn_exact(a1, 12) == 0.5);
  CHECK(e.vn_exact(a1, 14) == 6.0 / 14.0);
}

TEST_CASE("regular controls match their closed forms") {
  for (CorpusEntry& e : simple_regulars()) {
    const DpModel& m = e.dp();
    ValueTable t = finite_values(m, 10);
    for (int s = 0; s < m.num_states(); ++s)
      for (int n = 1; n <= 10; ++n)
        CHECK(t.value(n, s) == e.vn_exact(s, n));
    CHECK(e.expected_p_verdict == "HOLDS");
    CHECK(e.expected_pprime_verdict == "HOLDS");
  }
}

TEST_CASE("absorbing fractions zero out every block total") {
  std::vector<GammaFraction> fr = gamma_fractions(10);
  REQUIRE(fr.size() == 55);
  for (const GammaFraction& f : fr) {
    // (m-1) stages of +1 followed by absorption at num/den forever must
    // cancel: (m-1)*den + (2n-(m-1))*num = 0, exactly, in integers.
    CHECK((f.m - 1) * f.den + (f.two_n - (f.m - 1)) * f.num == 0);
    CHECK(f.den > 0);
    CHECK(f.num <= 0);
    CHECK(-f.num < f.den);
  }
  CHECK(fr[0].two_n == 2);
  CHECK(fr[0].m == 1);
  CHECK(fr[0].num == 0);
  CHECK(fr[0].den == 2);
}

TEST_CASE("block game entry carries the absorbing limits") {
  CorpusEntry e = make_corpus_entry("gamma");
  const ZsgModel& g = e.zsg();
  CHECK(g.num_states() == 112);
  CHECK(e.analytic_limit[static_cast<size_t>(g.index_of("root"))] == 0.0);
  CHECK(e.analytic_limit[static_cast<size_t>(g.index_of("term"))] == -1.0);
  CHECK(e.analytic_limit[static_cast<size_t>(g.index_of("abs20_3"))] ==
        -2.0 / 18.0);
  CHECK(e.vn_exact(g.index_of("root"), 7) == 0.0);
}

TEST_CASE("pennies-with-absorption entry pins the value at one half") {
  CorpusEntry e = make_corpus_entry("big-match");
  const ZsgModel& g = e.zsg();
  CHECK(g.num_states() == 3);
  CHECK(e.start_indices() == std::vector<int>{g.index_of("bm")});
  for (int n : {1, 7, 50})
    CHECK(e.vn_exact(g.index_of("bm"), n) == 0.5);
}

TEST_CASE("registry rejects unknown names and parameters") {
  CHECK_THROWS_WITH_AS(make_corpus_entry("nonesuch"),
                       doctest::Contains("unknown corpus entry"), ModelError);
  CHECK_THROWS_AS(make_corpus_entry("ls-nonregular", {{"depth", 3}}),
                  ModelError);
  CHECK_THROWS_AS(make_corpus_entry("big-match", {{"K", 3}}), ModelError);
  CHECK_THROWS_AS(make_corpus_entry("three-cycle", {{"K", 3}}), ModelError);
}
