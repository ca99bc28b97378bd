#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "trajlens/deviation.hpp"
#include "trajlens/dp_values.hpp"

namespace trajlens {

// One probability-weighted successor of an action pair.
struct ZsgTransition {
  int state = 0;
  double prob = 0.0;
};

// A state is either absorbing, paying rho every stage once reached, or
// active with an a1 x a2 stage payoff matrix and per-cell transition
// distributions. Payoffs live in [-1,1].
struct ZsgState {
  std::string id;
  bool absorbing = false;
  double rho = 0.0;
  std::vector<std::vector<double>> payoff;
  std::vector<std::vector<std::vector<ZsgTransition>>> next;  // next[i][j]

  int actions1() const { return static_cast<int>(payoff.size()); }
  int actions2() const {
    return payoff.empty() ? 0 : static_cast<int>(payoff[0].size());
  }
};

// Zero-sum stochastic game with absorbing states; player 1 (rows)
// maximizes. Immutable after construction.
class ZsgModel {
 public:
  ZsgModel() = default;

  // Validates ids, payoff ranges, matrix shapes, and that every
  // transition row is a probability distribution (sum within 1e-12).
  static ZsgModel create(std::vector<ZsgState> states);

  // {"type":"zsg","states":[{"id",absorbing:true,"rho"} |
  //  {"id",absorbing:false,"payoff":[[..]],"next":[[[{"s","p"},..],..],..]}]}
  static ZsgModel from_json_text(std::string_view text);
  std::string to_json_text(int indent = -1) const;

  int num_states() const { return static_cast<int>(states_.size()); }
  const ZsgState& state(int s) const { return states_[static_cast<size_t>(s)]; }
  int index_of(std::string_view id) const;
  std::optional<int> find(std::string_view id) const;
  std::uint64_t content_hash() const;

 private:
  std::vector<ZsgState> states_;
  std::unordered_map<std::string, int> index_;
};

// Finite-horizon values on unnormalized totals, as in the deterministic
// case: W_n(s) = n * rho at absorbing states, else the matrix-game value
// of stage payoff plus expected continuation.
class ZsgValueTable {
 public:
  ZsgValueTable(int num_states, int max_horizon)
      : num_states_(num_states),
        max_horizon_(max_horizon),
        totals_(static_cast<size_t>(max_horizon) * num_states, 0.0) {}

  int num_states() const { return num_states_; }
  int max_horizon() const { return max_horizon_; }
  double total(int n, int s) const { return totals_[idx(n, s)]; }
  double& total(int n, int s) { return totals_[idx(n, s)]; }
  double value(int n, int s) const { return total(n, s) / n; }
  std::vector<double> values_at(int n) const;

 private:
  size_t idx(int n, int s) const {
    return static_cast<size_t>(n - 1) * num_states_ + static_cast<size_t>(s);
  }
  int num_states_;
  int max_horizon_;
  std::vector<double> totals_;
};

// Backward recursion over matrix-game values. Stage games with a single
// row or column short-circuit to pure min/max, which keeps the one
// selector stage this library builds within the matrix kernel's size cap.
// A SingularGameError is re-thrown with the offending (n, state).
ZsgValueTable shapley_finite(const ZsgModel& game, int N);

// Fixed point of v = val[lambda g + (1-lambda) P v], iterated from zero;
// residual certified by one extra operator application.
DiscountedResult shapley_discounted(const ZsgModel& game, double lambda,
                                    double tol = 1e-12);

// Stage- and state-dependent mixed actions for one player:
// action[k][s] is the mix at stage k+1 in state s, empty at absorbing
// states. Both players' profiles share this shape.
struct MarkovProfile {
  std::vector<std::vector<std::vector<double>>> action;

  int stages() const { return static_cast<int>(action.size()); }
};

// The same per-state mix at every stage.
MarkovProfile stationary_profile(int stages,
                                 std::vector<std::vector<double>> per_state);

// Cumulative expected payoffs E[sum_{m<=k} f_m] for k = 1..n under the
// profile pair, by exact forward propagation of the state distribution;
// absorbed mass pays its rho every stage.
std::vector<double> eval_profile(const ZsgModel& game, const MarkovProfile& sigma,
                                 const MarkovProfile& tau, int start, int n);

struct ProfileEvaluation {
  std::vector<double> cumulative;          // E[sum_{m<=k} f_m], k = 1..n
  std::vector<std::vector<double>> dist;   // dist[k] = state law before stage k+1
};

ProfileEvaluation eval_profile_detailed(const ZsgModel& game,
                                        const MarkovProfile& sigma,
                                        const MarkovProfile& tau, int start, int n);

// Deviation profile of the expected payoff stream against v_ref.
DeviationProfile expected_deviation_profile(const ZsgModel& game,
                                            const MarkovProfile& sigma,
                                            const MarkovProfile& tau, int start,
                                            int n, double v_ref,
                                            const std::vector<double>& grid = {});

// Parses {"type":"profiles","stages":n,"p1":[...],"p2":[...]} where each
// player's entry is a list of per-stage objects mapping active state ids
// to mixed-action arrays; a single-element list is reused for all stages.
std::pair<MarkovProfile, MarkovProfile> profiles_from_json_text(
    const ZsgModel& game, std::string_view text);

}  // namespace trajlens
