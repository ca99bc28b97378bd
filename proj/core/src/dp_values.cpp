#include "trajlens/dp_values.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stack>
#include <utility>

#include "trajlens/errors.hpp"

namespace trajlens {

std::vector<double> ValueTable::values_at(int n) const {
  std::vector<double> v(static_cast<size_t>(num_states_));
  for (int s = 0; s < num_states_; ++s) v[static_cast<size_t>(s)] = value(n, s);
  return v;
}

double ValueTable::cauchy_gap(int n_lo, int n_hi) const {
  double gap = 0.0;
  for (int s = 0; s < num_states_; ++s)
    gap = std::max(gap, std::abs(value(n_lo, s) - value(n_hi, s)));
  return gap;
}

ValueTable finite_values(const DpModel& model, int N) {
  if (N < 1) throw ModelError("horizon must be >= 1");
  const int ns = model.num_states();
  ValueTable table(ns, N);
  for (int s = 0; s < ns; ++s) table.total(1, s) = model.state(s).payoff;
  for (int n = 2; n <= N; ++n) {
    for (int s = 0; s < ns; ++s) {
      double best = -std::numeric_limits<double>::infinity();
      for (int t : model.state(s).successors) best = std::max(best, table.total(n - 1, t));
      table.total(n, s) = model.state(s).payoff + best;
    }
  }
  return table;
}

DiscountedResult discounted_value(const DpModel& model, double lambda, double tol) {
  if (!(lambda > 0.0 && lambda <= 1.0))
    throw ModelError("discount must lie in (0,1]");
  if (!(tol > 0.0)) throw ModelError("tolerance must be positive");
  const int ns = model.num_states();
  DiscountedResult out;

  auto apply = [&](const std::vector<double>& v) {
    std::vector<double> next(static_cast<size_t>(ns));
    for (int s = 0; s < ns; ++s) {
      double best = -std::numeric_limits<double>::infinity();
      for (int t : model.state(s).successors)
        best = std::max(best, v[static_cast<size_t>(t)]);
      next[static_cast<size_t>(s)] =
          lambda * model.state(s).payoff + (1.0 - lambda) * best;
    }
    return next;
  };

  if (lambda == 1.0) {
    out.values.resize(static_cast<size_t>(ns));
    for (int s = 0; s < ns; ++s) out.values[static_cast<size_t>(s)] = model.state(s).payoff;
    out.iterations = 0;
    out.residual = 0.0;
    return out;
  }

  std::vector<double> v(static_cast<size_t>(ns), 0.0);
  for (;;) {
    std::vector<double> next = apply(v);
    ++out.iterations;
    double diff = 0.0;
    for (int s = 0; s < ns; ++s)
      diff = std::max(diff, std::abs(next[static_cast<size_t>(s)] - v[static_cast<size_t>(s)]));
    v = std::move(next);
    if (diff <= tol) break;
  }
  // One extra application certifies the fixed-point residual.
  std::vector<double> check = apply(v);
  double res = 0.0;
  for (int s = 0; s < ns; ++s)
    res = std::max(res, std::abs(check[static_cast<size_t>(s)] - v[static_cast<size_t>(s)]));
  out.values = std::move(check);
  out.residual = res;
  return out;
}

namespace {

// Tarjan strongly connected components, iterative. Components come out in
// reverse topological order of the condensation.
struct SccResult {
  std::vector<int> comp;               // state -> component id
  std::vector<std::vector<int>> members;
};

SccResult tarjan_scc(const DpModel& model) {
  const int ns = model.num_states();
  SccResult res;
  res.comp.assign(static_cast<size_t>(ns), -1);
  std::vector<int> index(static_cast<size_t>(ns), -1);
  std::vector<int> lowlink(static_cast<size_t>(ns), 0);
  std::vector<char> on_stack(static_cast<size_t>(ns), 0);
  std::vector<int> stack;
  int next_index = 0;

  struct Frame {
    int v;
    size_t child;
  };
  for (int root = 0; root < ns; ++root) {
    if (index[static_cast<size_t>(root)] != -1) continue;
    std::vector<Frame> call;
    call.push_back({root, 0});
    index[static_cast<size_t>(root)] = lowlink[static_cast<size_t>(root)] = next_index++;
    stack.push_back(root);
    on_stack[static_cast<size_t>(root)] = 1;
    while (!call.empty()) {
      Frame& fr = call.back();
      const auto& succ = model.state(fr.v).successors;
      if (fr.child < succ.size()) {
        int w = succ[fr.child++];
        if (index[static_cast<size_t>(w)] == -1) {
          index[static_cast<size_t>(w)] = lowlink[static_cast<size_t>(w)] = next_index++;
          stack.push_back(w);
          on_stack[static_cast<size_t>(w)] = 1;
          call.push_back({w, 0});
        } else if (on_stack[static_cast<size_t>(w)]) {
          lowlink[static_cast<size_t>(fr.v)] =
              std::min(lowlink[static_cast<size_t>(fr.v)], index[static_cast<size_t>(w)]);
        }
      } else {
        int v = fr.v;
        call.pop_back();
        if (!call.empty())
          lowlink[static_cast<size_t>(call.back().v)] =
              std::min(lowlink[static_cast<size_t>(call.back().v)], lowlink[static_cast<size_t>(v)]);
        if (lowlink[static_cast<size_t>(v)] == index[static_cast<size_t>(v)]) {
          std::vector<int> group;
          for (;;) {
            int w = stack.back();
            stack.pop_back();
            on_stack[static_cast<size_t>(w)] = 0;
            res.comp[static_cast<size_t>(w)] = static_cast<int>(res.members.size());
            group.push_back(w);
            if (w == v) break;
          }
          res.members.push_back(std::move(group));
        }
      }
    }
  }
  return res;
}

// Karp's maximum mean cycle within one strongly connected component. Edge
// weight is the payoff of the edge's source, so a cycle mean equals the
// mean payoff along it. Returns -inf for trivial components with no edge.
double karp_max_mean(const DpModel& model, const std::vector<int>& members,
                     const std::vector<int>& comp, int comp_id) {
  const double ninf = -std::numeric_limits<double>::infinity();
  const int k = static_cast<int>(members.size());
  if (k == 1) {
    int v = members[0];
    bool self = false;
    for (int t : model.state(v).successors)
      if (t == v) self = true;
    return self ? model.state(v).payoff : ninf;
  }
  std::vector<int> local(static_cast<size_t>(model.num_states()), -1);
  for (int i = 0; i < k; ++i) local[static_cast<size_t>(members[static_cast<size_t>(i)])] = i;

  // D[n][v] = best weight of an n-edge walk from an arbitrary source to v.
  std::vector<std::vector<double>> D(static_cast<size_t>(k) + 1,
                                     std::vector<double>(static_cast<size_t>(k), ninf));
  D[0].assign(static_cast<size_t>(k), 0.0);
  for (int n = 1; n <= k; ++n) {
    for (int i = 0; i < k; ++i) {
      int u = members[static_cast<size_t>(i)];
      if (D[static_cast<size_t>(n) - 1][static_cast<size_t>(i)] == ninf) continue;
      double base = D[static_cast<size_t>(n) - 1][static_cast<size_t>(i)] + model.state(u).payoff;
      for (int t : model.state(u).successors) {
        if (comp[static_cast<size_t>(t)] != comp_id) continue;
        int j = local[static_cast<size_t>(t)];
        D[static_cast<size_t>(n)][static_cast<size_t>(j)] =
            std::max(D[static_cast<size_t>(n)][static_cast<size_t>(j)], base);
      }
    }
  }
  double best = ninf;
  for (int j = 0; j < k; ++j) {
    if (D[static_cast<size_t>(k)][static_cast<size_t>(j)] == ninf) continue;
    double worst = std::numeric_limits<double>::infinity();
    for (int n = 0; n < k; ++n) {
      if (D[static_cast<size_t>(n)][static_cast<size_t>(j)] == ninf) continue;
      worst = std::min(worst, (D[static_cast<size_t>(k)][static_cast<size_t>(j)] -
                               D[static_cast<size_t>(n)][static_cast<size_t>(j)]) /
                                  (k - n));
    }
    best = std::max(best, worst);
  }
  return best;
}

}  // namespace

std::vector<double> max_mean_cycle_values(const DpModel& model) {
  const double ninf = -std::numeric_limits<double>::infinity();
  SccResult scc = tarjan_scc(model);
  const int nc = static_cast<int>(scc.members.size());

  std::vector<double> comp_mean(static_cast<size_t>(nc));
  for (int c = 0; c < nc; ++c)
    comp_mean[static_cast<size_t>(c)] =
        karp_max_mean(model, scc.members[static_cast<size_t>(c)], scc.comp, c);

  // Tarjan emits components in reverse topological order, so scanning
  // c = 0,1,... sees every successor component before its predecessors.
  std::vector<double> best(static_cast<size_t>(nc), ninf);
  for (int c = 0; c < nc; ++c) {
    double b = comp_mean[static_cast<size_t>(c)];
    for (int v : scc.members[static_cast<size_t>(c)])
      for (int t : model.state(v).successors) {
        int tc = scc.comp[static_cast<size_t>(t)];
        if (tc != c) b = std::max(b, best[static_cast<size_t>(tc)]);
      }
    best[static_cast<size_t>(c)] = b;
  }

  std::vector<double> out(static_cast<size_t>(model.num_states()));
  for (int s = 0; s < model.num_states(); ++s)
    out[static_cast<size_t>(s)] = best[static_cast<size_t>(scc.comp[static_cast<size_t>(s)])];
  return out;
}

std::pair<std::vector<double>, RegularityReport> limit_value_estimate(
    const DpModel& model, int N, double tol) {
  if (N < 2) throw ModelError("horizon must be >= 2");
  ValueTable table = finite_values(model, N);
  RegularityReport report;

  // Halving ladder: windows (N/2, N), (N/4, N/2), ... down to width 1.
  for (int hi = N; hi >= 2; hi /= 2) {
    int lo = hi / 2;
    if (lo < 1) break;
    report.ladder.push_back({lo, hi, table.cauchy_gap(lo, hi)});
  }

  DiscountedResult disc = discounted_value(model, 1.0 / N, 1e-12);
  std::vector<double> vN = table.values_at(N);
  double gap = 0.0;
  for (int s = 0; s < model.num_states(); ++s)
    gap = std::max(gap, std::abs(vN[static_cast<size_t>(s)] -
                                 disc.values[static_cast<size_t>(s)]));
  report.gap_vs_discounted = gap;

  report.cycle_oracle = max_mean_cycle_values(model);
  double ogap = 0.0;
  for (int s = 0; s < model.num_states(); ++s)
    ogap = std::max(ogap, std::abs(vN[static_cast<size_t>(s)] -
                                   report.cycle_oracle[static_cast<size_t>(s)]));
  report.oracle_gap = ogap;

  report.non_converged = !report.ladder.empty() && report.ladder.front().gap > tol;
  return {std::move(vN), std::move(report)};
}

std::vector<MonotoneViolation> check_monotone_limit(const DpModel& model,
                                                    const std::vector<double>& v,
                                                    double tol) {
  if (static_cast<int>(v.size()) != model.num_states())
    throw ModelError("value vector length does not match model");
  if (tol < 0.0) throw ModelError("tolerance must be nonnegative");
  std::vector<MonotoneViolation> out;
  for (int s = 0; s < model.num_states(); ++s)
    for (int t : model.state(s).successors)
      if (v[static_cast<size_t>(t)] > v[static_cast<size_t>(s)] + tol)
        out.push_back({s, t, v[static_cast<size_t>(s)], v[static_cast<size_t>(t)]});
  return out;
}

}  // namespace trajlens
