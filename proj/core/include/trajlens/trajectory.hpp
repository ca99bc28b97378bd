#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "trajlens/deviation.hpp"
#include "trajlens/dp_model.hpp"
#include "trajlens/dp_values.hpp"

namespace trajlens {

// Value-greedy play of length n from start. The returned play's total()
// equals the table's n-stage total at start bit for bit, because both
// accumulate the same payoffs in the same right-nested order. Ties in the
// per-step argmax break toward the lowest successor index.
Play optimal_play(const DpModel& model, const ValueTable& table, int start, int n);
Play optimal_play(const DpModel& model, int start, int n);

struct EnumerationResult {
  std::vector<Play> plays;
  bool truncated = false;  // stopped at limit with matches still unseen
};

// All feasible n-stage plays from start whose total payoff is at least
// n-stage-total(start) - n*eps, in lexicographic order of successor
// choices, at most limit of them. Subtrees are pruned with the exact
// bound prefix + best-tail-total; the small guard below keeps plays whose
// forward prefix sum and backward total disagree by rounding noise, and
// the final filter re-tests the play's own total against the threshold.
EnumerationResult enumerate_eps_optimal_plays(const DpModel& model, int start, int n,
                                              double eps, long long limit);

// Streaming variant; emit is called once per qualifying play, in order.
// Returns true when the limit cut the stream short.
bool for_each_eps_optimal_play(const DpModel& model, const ValueTable& table,
                               int start, int n, double eps, long long limit,
                               const std::function<void(const Play&)>& emit);

// Slack for branch-and-bound pruning only; emission is decided by a plain
// threshold comparison, mirrored exactly by the brute-force test oracle.
inline constexpr double kPruneGuard = 1e-9;

struct CheckOptions {
  // Start states to examine; empty means every state.
  std::vector<int> starts;
  // Reference limit values per state; unset means the max-mean-cycle
  // oracle. Curated models carry exact analytic limits instead.
  std::optional<std::vector<double>> reference;
  double discount_tol = 1e-12;
  // Discounted checks refuse effective horizons beyond this depth.
  int max_depth = 1000000;
};

struct Witness {
  Play play;
  int state = 0;
  int horizon = 0;      // play horizon (discounted: truncation depth)
  double lambda = 0.0;  // 0 for average checks
  double t = 0.0;
  double deviation = 0.0;
};

// One examined (horizon, start) or (discount, start) cell.
struct CheckRow {
  int horizon = 0;      // discounted rows report the effective horizon
  double lambda = 0.0;  // 0 for average rows
  int state = 0;
  long long plays_examined = 0;
  bool truncated = false;
  double sup_dev = 0.0;
  double inf_dev = 0.0;
  double sup_t = 0.0;
  double inf_t = 0.0;
  std::vector<double> grid_dev;  // per grid t: deviation of largest magnitude
  bool pass = false;             // max(|sup|, |inf|) <= 3*eps
};

struct PReport {
  enum class Kind { kAverage, kDiscounted };
  Kind kind = Kind::kAverage;
  double epsilon = 0.0;
  std::vector<int> horizons;     // average checks
  std::vector<double> lambdas;   // discounted checks
  std::vector<int> starts;
  std::vector<double> reference; // per-state reference values used
  std::vector<double> grid;
  std::vector<CheckRow> rows;

  std::string verdict;           // "HOLDS" or "VIOLATED"
  int n0 = -1;                   // smallest tested horizon from which all larger pass
  double lambda0 = 0.0;          // largest tested discount from which all smaller pass
  std::optional<Witness> witness;
  bool partial_coverage = false; // some enumeration hit its limit
  double coverage_margin = 0.0;  // discounted: worst truncated-tail weight
};

// Checks the 3*eps running-average bound over every eps-optimal play at
// each listed horizon and start. VIOLATED exactly when the largest tested
// horizon still has a deviation beyond the bound; the witness play is
// re-validated (feasible, eps-optimal, deviation past the bound) before
// the report is returned. HOLDS reports n0, the smallest tested horizon
// from which every larger tested horizon stays within the bound.
PReport check_property_P(const DpModel& model, double eps,
                         const std::vector<int>& horizons,
                         const std::vector<double>& grid, long long limit,
                         const CheckOptions& opts = {});

// Number of stages the cumulated discount weights need to cover the
// fraction t of total duration: the smallest p with 1-(1-lambda)^p >= t.
// t = 0 gives 0; t = 1 has no finite stage count and is rejected (callers
// treat it as the full discounted sum).
int discounted_stage_count(double lambda, double t, int max_depth = 1000000);

// Smallest p with (1-lambda)^p <= eps/10: the depth beyond which the
// remaining discounted weight cannot move any deviation by more than
// eps/10. Throws EffectiveHorizonError past max_depth.
int effective_horizon(double lambda, double eps, int max_depth = 1000000);

// Discounted analogue. Plays eps-optimal for the lambda-discounted
// program are enumerated by their prefixes up to the effective horizon
// H = min{p : (1-lambda)^p <= eps/10}, each class represented by the
// value-greedy completion of its prefix; the untested tail carries weight
// (1-lambda)^H, recorded as coverage_margin. Partial discounted sums are
// compared to t * reference at the time changes t_p = 1 - (1-lambda)^p;
// t = 1 evaluates the full discounted sum. VIOLATED exactly when the
// smallest tested discount breaks the bound; HOLDS reports lambda0, the
// largest tested discount from which every smaller tested discount stays
// within it.
PReport check_property_Pprime(const DpModel& model, double eps,
                              const std::vector<double>& lambdas,
                              const std::vector<double>& grid, long long limit,
                              const CheckOptions& opts = {});

// Finite-range probe of the two uniform-value conditions at a single
// state: the horizon-Nmax greedy play must average at least v - eps over
// every n in [N, Nmax], and the n-stage values must not exceed v + eps
// there. The candidate v is the Nmax-stage value at the state. Evidence
// only; the probe proves nothing beyond the tested range.
struct UniformProbe {
  int state = 0;
  double epsilon = 0.0;
  int N = 0;
  int Nmax = 0;
  double v_ref = 0.0;
  Play play;
  bool play_ok = false;
  int first_fail_play = -1;  // first n in [N, Nmax] breaking condition 1
  bool values_ok = false;
  int first_fail_value = -1;
};

UniformProbe uniform_value_probe(const DpModel& model, int s, double eps, int N,
                                 int Nmax);

}  // namespace trajlens
