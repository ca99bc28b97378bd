#pragma once

#include <map>
#include <utility>
#include <vector>

#include "trajlens/dp_model.hpp"

namespace trajlens {

// Finite-horizon values, kept as unnormalized totals W_n(s) (the optimal
// n-stage sum of payoffs) and normalized only on read. W_1 = f.
class ValueTable {
 public:
  ValueTable(int num_states, int max_horizon)
      : num_states_(num_states),
        max_horizon_(max_horizon),
        totals_(static_cast<size_t>(max_horizon) * num_states, 0.0) {}

  int num_states() const { return num_states_; }
  int max_horizon() const { return max_horizon_; }

  double total(int n, int s) const { return totals_[idx(n, s)]; }
  double& total(int n, int s) { return totals_[idx(n, s)]; }

  // v_n(s) = W_n(s) / n.
  double value(int n, int s) const { return total(n, s) / n; }
  std::vector<double> values_at(int n) const;

  // sup_s |v_lo(s) - v_hi(s)| over the horizon window (n_lo, n_hi).
  double cauchy_gap(int n_lo, int n_hi) const;

  // Discounted vectors computed alongside the table, keyed by discount.
  std::map<double, std::vector<double>> discounted_values;

 private:
  size_t idx(int n, int s) const {
    return static_cast<size_t>(n - 1) * num_states_ + static_cast<size_t>(s);
  }

  int num_states_;
  int max_horizon_;
  std::vector<double> totals_;
};

// Exact n-stage values for all n <= N via the totals recursion
// W_n(s) = f(s) + max over successors s' of W_{n-1}(s'), W_1 = f.
ValueTable finite_values(const DpModel& model, int N);

struct DiscountedResult {
  std::vector<double> values;
  int iterations = 0;
  double residual = 0.0;  // sup-norm of one extra fixed-point step
};

// Fixed point of v(s) = lambda f(s) + (1-lambda) max_{s'} v(s'), iterated
// from the zero vector; the contraction factor (1-lambda) bounds the
// iteration count. lambda = 1 returns f directly.
DiscountedResult discounted_value(const DpModel& model, double lambda,
                                  double tol = 1e-12);

// Per-state limit oracle for deterministic finite models: the maximum
// cycle mean over cycles reachable from each state.
std::vector<double> max_mean_cycle_values(const DpModel& model);

struct HorizonWindow {
  int n_lo = 0;
  int n_hi = 0;
  double gap = 0.0;  // sup_s |v_{n_lo}(s) - v_{n_hi}(s)|
};

struct RegularityReport {
  std::vector<HorizonWindow> ladder;   // halving windows (N/2^k, N/2^{k-1})
  double gap_vs_discounted = 0.0;      // sup_s |v_N(s) - v_{1/N}(s)|
  std::vector<double> cycle_oracle;    // max-mean-cycle values per state
  double oracle_gap = 0.0;             // sup_s |v_N(s) - oracle(s)|
  bool non_converged = false;          // largest window's gap exceeds tol
};

// Returns v_N as the limit estimate together with convergence diagnostics.
// NON_CONVERGED is advisory: it reports that the widest window (N/2, N)
// still moves by more than tol.
std::pair<std::vector<double>, RegularityReport> limit_value_estimate(
    const DpModel& model, int N, double tol);

struct MonotoneViolation {
  int from = 0;
  int to = 0;
  double v_from = 0.0;
  double v_to = 0.0;
};

// All successor pairs (s, s') with v(s') > v(s) + tol. A genuine limit
// vector never increases along feasible steps, so the list is empty for
// exact limits even at tol = 0.
std::vector<MonotoneViolation> check_monotone_limit(const DpModel& model,
                                                    const std::vector<double>& v,
                                                    double tol);

}  // namespace trajlens
