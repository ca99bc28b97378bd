#pragma once

#include <vector>

#include "trajlens/dp_model.hpp"

namespace trajlens {

// Running-average deviation of a payoff stream from a reference value:
// D(t) = (1/n) * sum_{m <= [tn]} f_m - t * v_ref, t in [0,1].
//
// D only changes at the breakpoints t = m/n and is linear with slope
// -v_ref in between, so the exact extremes over all of [0,1] come from
// scanning the attained values D(m/n) together with the one-sided limits
// approaching each breakpoint from the left. Both families enter both
// extreme candidates so the scan stays correct for negative references.
struct DeviationProfile {
  int horizon = 0;
  int start = 0;
  double v_ref = 0.0;

  std::vector<double> grid;       // requested t values
  std::vector<double> deviation;  // D(t) per grid entry

  double sup_dev = 0.0;  // exact supremum of D over [0,1]
  double inf_dev = 0.0;  // exact infimum of D over [0,1]
  double sup_t = 0.0;    // t attaining (or approaching) the supremum
  double inf_t = 0.0;

  // prefix[m] = sum of the first m payoffs, m = 0..n.
  std::vector<double> prefix;

  // D at an arbitrary t. The stage count [tn] is floor(t*n + 1e-9): grid
  // values arrive as decimal fractions whose binary form can sit a few
  // ulps under an exact multiple of 1/n, and the nudge reads them as the
  // intended breakpoint. Exact analyses use breakpoint() instead.
  double at(double t) const;

  // D(t1,t2) = D(t2) - D(t1): average payoff over ([t1 n], [t2 n]] minus
  // (t2-t1) * v_ref.
  double interval(double t1, double t2) const;

  // D(m/n) computed from the integer stage index, no rounding involved.
  double breakpoint(int m) const;
};

// Profile of a single play against v_ref.
DeviationProfile deviation_profile(const Play& play, double v_ref,
                                   const std::vector<double>& grid);

// Profile from precomputed partial sums (prefix[m] = sum of first m
// payoffs, prefix[0] = 0); used for expected payoff streams.
DeviationProfile deviation_profile_from_prefix(std::vector<double> prefix,
                                               int start, double v_ref,
                                               const std::vector<double>& grid);

// {0, 1/k, 2/k, ..., 1}.
std::vector<double> uniform_grid(int k);

}  // namespace trajlens
