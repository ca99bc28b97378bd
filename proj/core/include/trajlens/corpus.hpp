#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "trajlens/dp_model.hpp"
#include "trajlens/stochastic_game.hpp"

namespace trajlens {

// A bundled example model with its known exact reference values. Each
// generator re-verifies its references against the solvers once per
// process, at small fixed parameters.
struct CorpusEntry {
  std::string name;
  std::vector<std::pair<std::string, double>> params;

  std::optional<DpModel> dp_model;
  std::optional<ZsgModel> zsg_model;

  // Designated start states for checkers and demos.
  std::vector<std::string> start_ids;

  // Exact limit of the n-stage values per state, when known.
  std::vector<double> analytic_limit;

  // Exact n-stage value where a closed form exists; NaN otherwise.
  // Arguments: state index, horizon.
  std::function<double(int, int)> vn_exact;

  std::string expected_p_verdict;       // "", "HOLDS", or "VIOLATED"
  std::string expected_pprime_verdict;  // same convention
  std::string notes;

  bool has_dp() const { return dp_model.has_value(); }
  const DpModel& dp() const;
  const ZsgModel& zsg() const;
  std::vector<int> start_indices() const;
};

// Many short payoff chains hanging off a spine of zero-payoff states:
// the only way to collect is to walk k spine states and then a chain of
// k ones. Truncated at depth K >= 2. Even-horizon values at the spine
// head are exactly 1/2 up to horizon 2K while the truncated family's
// limit drifts, which is what the negative checker controls exercise.
CorpusEntry ls_nonregular(int K);

// The classical 2x2 absorbing game with value 1/2: row a absorbs at
// payoff 1 or 0 depending on the column, row b keeps playing for the
// matching pennies payoff.
CorpusEntry big_match();

// Root state where player 1 picks one of n_max blocks; block 2n is a
// chain of n jointly controlled stages paying 1 on cooperation, with any
// unilateral move absorbing at exactly the payoff that zeroes the total.
// Every length-2n path through a block totals 0, so all values vanish.
CorpusEntry gamma_game(int n_max);

// Positive controls: models whose n-stage values converge cleanly.
std::vector<CorpusEntry> simple_regulars();

// Exact absorbing fractions of the block construction, as integers:
// x = num/den with num = -(m-1), den = 2n-(m-1).
struct GammaFraction {
  int two_n = 0;
  int m = 0;
  long long num = 0;
  long long den = 1;
};
std::vector<GammaFraction> gamma_fractions(int n_max);

// Registry used by the command line: names plus parameterized lookup.
std::vector<std::string> corpus_names();
CorpusEntry make_corpus_entry(const std::string& name,
                              const std::vector<std::pair<std::string, double>>& params = {});

}  // namespace trajlens
