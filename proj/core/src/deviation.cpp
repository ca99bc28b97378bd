#include "trajlens/deviation.hpp"

#include <algorithm>
#include <cmath>

#include "trajlens/errors.hpp"

namespace trajlens {

namespace {
int stage_of(double t, int n) {
  int m = static_cast<int>(std::floor(t * n + 1e-9));
  return std::clamp(m, 0, n);
}
}  // namespace

double DeviationProfile::at(double t) const {
  int m = stage_of(t, horizon);
  return prefix[static_cast<size_t>(m)] / horizon - t * v_ref;
}

double DeviationProfile::interval(double t1, double t2) const { return at(t2) - at(t1); }

double DeviationProfile::breakpoint(int m) const {
  return prefix[static_cast<size_t>(m)] / horizon -
         (static_cast<double>(m) / horizon) * v_ref;
}

DeviationProfile deviation_profile_from_prefix(std::vector<double> prefix, int start,
                                               double v_ref,
                                               const std::vector<double>& grid) {
  const int n = static_cast<int>(prefix.size()) - 1;
  if (n < 1) throw ModelError("deviation profile needs at least one stage");
  DeviationProfile p;
  p.horizon = n;
  p.start = start;
  p.v_ref = v_ref;
  p.prefix = std::move(prefix);
  p.grid = grid;

  // Attained values D(m/n) plus left limits at each breakpoint. D is
  // linear between breakpoints, so these cover the extremes exactly.
  p.sup_dev = p.breakpoint(0);
  p.inf_dev = p.breakpoint(0);
  p.sup_t = 0.0;
  p.inf_t = 0.0;
  auto consider = [&](double d, double t) {
    if (d > p.sup_dev) {
      p.sup_dev = d;
      p.sup_t = t;
    }
    if (d < p.inf_dev) {
      p.inf_dev = d;
      p.inf_t = t;
    }
  };
  for (int m = 1; m <= n; ++m) {
    double t = static_cast<double>(m) / n;
    consider(p.breakpoint(m), t);
    // Limit of D as t approaches m/n from below: stage count still m-1.
    consider(p.prefix[static_cast<size_t>(m) - 1] / n - t * v_ref, t);
  }

  p.deviation.reserve(grid.size());
  for (double t : grid) {
    if (!(t >= 0.0 && t <= 1.0))
      throw ModelError("grid value " + std::to_string(t) + " outside [0,1]");
    p.deviation.push_back(p.at(t));
  }
  return p;
}

DeviationProfile deviation_profile(const Play& play, double v_ref,
                                   const std::vector<double>& grid) {
  std::vector<double> prefix(play.payoffs.size() + 1, 0.0);
  for (size_t m = 0; m < play.payoffs.size(); ++m)
    prefix[m + 1] = prefix[m] + play.payoffs[m];
  DeviationProfile p =
      deviation_profile_from_prefix(std::move(prefix), play.start, v_ref, grid);
  return p;
}

std::vector<double> uniform_grid(int k) {
  std::vector<double> g;
  g.reserve(static_cast<size_t>(k) + 1);
  for (int i = 0; i <= k; ++i) g.push_back(static_cast<double>(i) / k);
  return g;
}

}  // namespace trajlens
