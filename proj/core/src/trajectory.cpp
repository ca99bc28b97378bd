#include "trajlens/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <utility>

#include "trajlens/errors.hpp"
#include "trajlens/parallel.hpp"

namespace trajlens {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw ModelError(what);
}

}  // namespace

Play optimal_play(const DpModel& model, const ValueTable& table, int start, int n) {
  require(start >= 0 && start < model.num_states(), "start state out of range");
  require(n >= 1 && n <= table.max_horizon(), "horizon outside the computed table");
  Play p;
  p.start = start;
  p.sequence.reserve(static_cast<size_t>(n));
  p.payoffs.reserve(static_cast<size_t>(n));
  int cur = start;
  p.sequence.push_back(cur);
  p.payoffs.push_back(model.state(cur).payoff);
  for (int placed = 1; placed < n; ++placed) {
    int remaining = n - placed;
    int best = -1;
    double best_total = -std::numeric_limits<double>::infinity();
    for (int t : model.state(cur).successors) {
      double w = table.total(remaining, t);
      if (w > best_total || (w == best_total && t < best)) {
        best_total = w;
        best = t;
      }
    }
    cur = best;
    p.sequence.push_back(cur);
    p.payoffs.push_back(model.state(cur).payoff);
  }
  return p;
}

Play optimal_play(const DpModel& model, int start, int n) {
  ValueTable table = finite_values(model, n);
  return optimal_play(model, table, start, n);
}

bool for_each_eps_optimal_play(const DpModel& model, const ValueTable& table,
                               int start, int n, double eps, long long limit,
                               const std::function<void(const Play&)>& emit) {
  require(start >= 0 && start < model.num_states(), "start state out of range");
  require(n >= 1 && n <= table.max_horizon(), "horizon outside the computed table");
  require(eps >= 0.0, "epsilon must be nonnegative");
  require(limit >= 1, "enumeration limit must be >= 1");

  // Threshold on totals: n * (v_n(s) - eps) evaluated as W_n(s) - n*eps.
  const double threshold = table.total(n, start) - n * eps;

  std::vector<int> seq{start};
  std::vector<double> prefix{0.0, model.state(start).payoff};
  struct Frame {
    size_t child = 0;
  };
  std::vector<Frame> frames(1);
  long long emitted = 0;
  bool truncated = false;

  // Emits the current full-length sequence if its total qualifies.
  // Returns false once the limit is hit with a further match in hand.
  auto leaf = [&]() -> bool {
    double tot = 0.0;
    for (size_t i = seq.size(); i > 0; --i)
      tot += model.state(seq[i - 1]).payoff;
    if (tot >= threshold) {
      if (emitted == limit) {
        truncated = true;
        return false;
      }
      Play p;
      p.start = start;
      p.sequence = seq;
      p.payoffs.reserve(seq.size());
      for (int u : seq) p.payoffs.push_back(model.state(u).payoff);
      emit(p);
      ++emitted;
    }
    return true;
  };

  if (n == 1) {
    leaf();
    return truncated;
  }

  while (!frames.empty()) {
    int d = static_cast<int>(frames.size());
    if (d == n) {
      if (!leaf()) return true;
      frames.pop_back();
      seq.pop_back();
      prefix.pop_back();
      continue;
    }
    Frame& fr = frames.back();
    const auto& succ = model.state(seq[static_cast<size_t>(d) - 1]).successors;
    if (fr.child < succ.size()) {
      int t = succ[fr.child++];
      double bound = prefix[static_cast<size_t>(d)] + table.total(n - d, t);
      if (bound < threshold - kPruneGuard) continue;
      seq.push_back(t);
      prefix.push_back(prefix[static_cast<size_t>(d)] + model.state(t).payoff);
      frames.push_back({});
    } else {
      frames.pop_back();
      seq.pop_back();
      prefix.pop_back();
    }
  }
  return truncated;
}

EnumerationResult enumerate_eps_optimal_plays(const DpModel& model, int start, int n,
                                              double eps, long long limit) {
  ValueTable table = finite_values(model, n);
  EnumerationResult res;
  res.truncated = for_each_eps_optimal_play(
      model, table, start, n, eps, limit,
      [&](const Play& p) { res.plays.push_back(p); });
  return res;
}

namespace {

struct CellResult {
  CheckRow row;
  std::optional<Witness> witness;
};

std::vector<int> resolve_starts(const DpModel& model, const CheckOptions& opts) {
  if (!opts.starts.empty()) {
    for (int s : opts.starts)
      require(s >= 0 && s < model.num_states(), "start state out of range");
    return opts.starts;
  }
  std::vector<int> all(static_cast<size_t>(model.num_states()));
  for (int s = 0; s < model.num_states(); ++s) all[static_cast<size_t>(s)] = s;
  return all;
}

std::vector<double> resolve_reference(const DpModel& model, const CheckOptions& opts) {
  if (opts.reference) {
    require(static_cast<int>(opts.reference->size()) == model.num_states(),
            "reference vector length does not match model");
    return *opts.reference;
  }
  return max_mean_cycle_values(model);
}

void check_grid(const std::vector<double>& grid) {
  for (double t : grid)
    require(t >= 0.0 && t <= 1.0, "grid value outside [0,1]");
}

// The profile's extremes can live in left limits that DeviationProfile::at
// never attains. Witness times must reproduce through at(), so back off
// inside the stage until the step value itself clears the band.
std::optional<std::pair<double, double>> attained_exceedance(
    const DeviationProfile& prof, double t, double bound) {
  double d0 = prof.at(t);
  if (std::abs(d0) > bound) return std::make_pair(t, d0);
  // Stay clear of the 1e-9 snap in at()'s stage lookup.
  double step = 0.5 / prof.horizon;
  while (step * prof.horizon > 4e-9) {
    double tk = t - step;
    if (tk < 0.0) break;
    double dk = prof.at(tk);
    if (std::abs(dk) > bound) return std::make_pair(tk, dk);
    step *= 0.5;
  }
  return std::nullopt;
}

// Folds one play's profile into the row aggregates and keeps the most
// deviant play as the witness candidate once it leaves the 3*eps band.
void fold_profile(const DeviationProfile& prof, const Play& play, int state,
                  int horizon, double lambda, double eps, CellResult& cell) {
  CheckRow& row = cell.row;
  if (row.plays_examined == 0) {
    row.sup_dev = prof.sup_dev;
    row.inf_dev = prof.inf_dev;
    row.sup_t = prof.sup_t;
    row.inf_t = prof.inf_t;
  } else {
    if (prof.sup_dev > row.sup_dev) {
      row.sup_dev = prof.sup_dev;
      row.sup_t = prof.sup_t;
    }
    if (prof.inf_dev < row.inf_dev) {
      row.inf_dev = prof.inf_dev;
      row.inf_t = prof.inf_t;
    }
  }
  for (size_t i = 0; i < prof.deviation.size(); ++i)
    if (std::abs(prof.deviation[i]) > std::abs(row.grid_dev[i]))
      row.grid_dev[i] = prof.deviation[i];
  ++row.plays_examined;

  const double bound = 3.0 * eps;
  double best_d = 0.0, best_t = 0.0;
  for (auto [d, t] : {std::pair{prof.sup_dev, prof.sup_t},
                      std::pair{prof.inf_dev, prof.inf_t}}) {
    if (std::abs(d) <= bound) continue;
    if (auto w = attained_exceedance(prof, t, bound))
      if (std::abs(w->second) > std::abs(best_d)) {
        best_d = w->second;
        best_t = w->first;
      }
  }
  if (std::abs(best_d) > bound &&
      (!cell.witness || std::abs(best_d) > std::abs(cell.witness->deviation))) {
    cell.witness = Witness{play, state, horizon, lambda, best_t, best_d};
  }
}

void finish_row(CheckRow& row, double eps) {
  if (row.plays_examined == 0) {
    row.sup_dev = row.inf_dev = 0.0;
  }
  row.pass = row.sup_dev <= 3.0 * eps && row.inf_dev >= -3.0 * eps;
}

void validate_average_witness(const DpModel& model, const ValueTable& table,
                              double eps, const std::vector<double>& ref,
                              const Witness& w) {
  if (!is_feasible(model, w.play))
    throw std::logic_error("witness play is not feasible");
  const int n = w.play.horizon();
  double threshold = table.total(n, w.state) - n * eps;
  if (w.play.total() < threshold)
    throw std::logic_error("witness play is not eps-optimal");
  DeviationProfile prof = deviation_profile(w.play, ref[static_cast<size_t>(w.state)], {});
  if (std::abs(prof.at(w.t)) <= 3.0 * eps)
    throw std::logic_error("witness deviation does not exceed the bound");
}

}  // namespace

PReport check_property_P(const DpModel& model, double eps,
                         const std::vector<int>& horizons,
                         const std::vector<double>& grid, long long limit,
                         const CheckOptions& opts) {
  require(eps > 0.0, "epsilon must be positive");
  require(!horizons.empty(), "at least one horizon required");
  require(limit >= 1, "enumeration limit must be >= 1");
  check_grid(grid);

  PReport report;
  report.kind = PReport::Kind::kAverage;
  report.epsilon = eps;
  report.horizons = horizons;
  std::sort(report.horizons.begin(), report.horizons.end());
  report.horizons.erase(std::unique(report.horizons.begin(), report.horizons.end()),
                        report.horizons.end());
  require(report.horizons.front() >= 1, "horizons must be >= 1");
  report.starts = resolve_starts(model, opts);
  report.reference = resolve_reference(model, opts);
  report.grid = grid;

  const int N = report.horizons.back();
  const ValueTable table = finite_values(model, N);

  const size_t ncells = report.horizons.size() * report.starts.size();
  std::vector<CellResult> cells(ncells);
  parallel_for(static_cast<int>(ncells), [&](int c) {
    const size_t hi = static_cast<size_t>(c) / report.starts.size();
    const size_t si = static_cast<size_t>(c) % report.starts.size();
    const int h = report.horizons[hi];
    const int s = report.starts[si];
    CellResult& cell = cells[static_cast<size_t>(c)];
    cell.row.horizon = h;
    cell.row.state = s;
    cell.row.grid_dev.assign(report.grid.size(), 0.0);
    const double v = report.reference[static_cast<size_t>(s)];
    cell.row.truncated = for_each_eps_optimal_play(
        model, table, s, h, eps, limit, [&](const Play& play) {
          DeviationProfile prof = deviation_profile(play, v, report.grid);
          fold_profile(prof, play, s, h, 0.0, eps, cell);
        });
    finish_row(cell.row, eps);
  });

  report.rows.reserve(ncells);
  for (const CellResult& cell : cells) {
    report.rows.push_back(cell.row);
    report.partial_coverage = report.partial_coverage || cell.row.truncated;
  }

  // A horizon passes when every examined start stays inside the band.
  std::vector<char> horizon_pass(report.horizons.size(), 1);
  for (size_t hi = 0; hi < report.horizons.size(); ++hi)
    for (size_t si = 0; si < report.starts.size(); ++si)
      if (!cells[hi * report.starts.size() + si].row.pass)
        horizon_pass[hi] = 0;

  if (!horizon_pass.back()) {
    report.verdict = "VIOLATED";
    const size_t hi = report.horizons.size() - 1;
    for (size_t si = 0; si < report.starts.size(); ++si) {
      const auto& cand = cells[hi * report.starts.size() + si].witness;
      if (cand && (!report.witness ||
                   std::abs(cand->deviation) > std::abs(report.witness->deviation)))
        report.witness = cand;
    }
    if (!report.witness)
      throw std::logic_error("violated verdict without a witness");
    validate_average_witness(model, table, eps, report.reference, *report.witness);
  } else {
    report.verdict = "HOLDS";
    size_t first = report.horizons.size() - 1;
    while (first > 0 && horizon_pass[first - 1]) --first;
    report.n0 = report.horizons[first];
  }
  return report;
}

int discounted_stage_count(double lambda, double t, int max_depth) {
  require(lambda > 0.0 && lambda < 1.0, "discount must lie in (0,1)");
  require(t >= 0.0 && t < 1.0, "time fraction must lie in [0,1)");
  if (t <= 0.0) return 0;
  const double q = 1.0 - lambda;
  double qp = 1.0;
  for (int p = 1; p <= max_depth; ++p) {
    qp *= q;
    // 1 - q^p >= t, evaluated with a nudge for decimal-fraction inputs.
    if (1.0 - qp >= t - 1e-12) return p;
  }
  throw EffectiveHorizonError("stage count for t exceeds max depth");
}

int effective_horizon(double lambda, double eps, int max_depth) {
  require(lambda > 0.0 && lambda < 1.0, "discount must lie in (0,1)");
  require(eps > 0.0, "epsilon must be positive");
  const double q = 1.0 - lambda;
  const double cut = eps / 10.0;
  double qp = 1.0;
  for (int p = 1; p <= max_depth; ++p) {
    qp *= q;
    if (qp <= cut) return p;
  }
  throw EffectiveHorizonError(
      "effective horizon exceeds max depth; truncated tail would outweigh eps/10");
}

namespace {

// Discounted analogue of the breakpoint scan: partial sums C_p change at
// the time fractions t_p = 1 - q^p, and the deviation C_p - t * v is
// linear in t between them.
struct DiscScan {
  std::vector<double> C;   // C[p] = sum_{m<=p} lambda q^{m-1} f_m
  std::vector<double> tp;  // tp[p] = 1 - q^p
  double sup = 0.0, inf = 0.0, sup_t = 0.0, inf_t = 0.0;
};

DiscScan scan_discounted(const std::vector<double>& payoffs, double lambda,
                         double v_ref) {
  const double q = 1.0 - lambda;
  const size_t P = payoffs.size();
  DiscScan sc;
  sc.C.resize(P + 1);
  sc.tp.resize(P + 1);
  sc.C[0] = 0.0;
  sc.tp[0] = 0.0;
  double qp = 1.0;  // q^{p-1} entering stage p
  for (size_t p = 1; p <= P; ++p) {
    sc.C[p] = sc.C[p - 1] + lambda * qp * payoffs[p - 1];
    qp *= q;
    sc.tp[p] = 1.0 - qp;
  }
  auto consider = [&](double d, double t) {
    if (d > sc.sup) {
      sc.sup = d;
      sc.sup_t = t;
    }
    if (d < sc.inf) {
      sc.inf = d;
      sc.inf_t = t;
    }
  };
  // D(0) = 0 seeds both extremes; per stage take the attained value at
  // t_p and the one-sided limit just past t_{p-1}, then the full sum at
  // t = 1 (the tail beyond the scanned stages is below 1e-18).
  for (size_t p = 1; p <= P; ++p) {
    consider(sc.C[p] - sc.tp[p] * v_ref, sc.tp[p]);
    consider(sc.C[p] - sc.tp[p - 1] * v_ref, sc.tp[p - 1]);
  }
  consider(sc.C[P] - v_ref, 1.0);
  return sc;
}

double disc_deviation_at(const DiscScan& sc, double t, double v_ref) {
  if (t >= 1.0) return sc.C.back() - v_ref;
  auto it = std::lower_bound(sc.tp.begin(), sc.tp.end(), t - 1e-12);
  size_t p = (it == sc.tp.end()) ? sc.tp.size() - 1
                                 : static_cast<size_t>(it - sc.tp.begin());
  return sc.C[p] - t * v_ref;
}

// Mirror of attained_exceedance for the discounted scan, whose unattained
// extremes are right limits just past a breakpoint. Witness times must
// reproduce through disc_deviation_at, so nudge up within the segment.
std::optional<std::pair<double, double>> attained_disc_exceedance(
    const DiscScan& sc, double v_ref, double t, double bound) {
  double d0 = disc_deviation_at(sc, t, v_ref);
  if (std::abs(d0) > bound) return std::make_pair(t, d0);
  auto it = std::lower_bound(sc.tp.begin(), sc.tp.end(), t - 1e-12);
  if (it == sc.tp.end()) return std::nullopt;
  size_t p = static_cast<size_t>(it - sc.tp.begin());
  if (p + 1 >= sc.tp.size()) return std::nullopt;
  // Stay clear of the 1e-12 snap in disc_deviation_at's segment lookup.
  for (double step = (sc.tp[p + 1] - sc.tp[p]) * 0.5; step > 4e-12;
       step *= 0.5) {
    double tk = t + step;
    double dk = disc_deviation_at(sc, tk, v_ref);
    if (std::abs(dk) > bound) return std::make_pair(tk, dk);
  }
  return std::nullopt;
}

struct DiscountedContext {
  double lambda = 0.0;
  double q = 0.0;
  int H = 0;      // enumeration depth
  int P_max = 0;  // evaluation depth, tail weight < 1e-18
  std::vector<double> qpow;  // q^0 .. q^P_max
  std::vector<double> v_lambda;
};

DiscountedContext make_context(const DpModel& model, double lambda, double eps,
                               const CheckOptions& opts) {
  DiscountedContext ctx;
  ctx.lambda = lambda;
  ctx.q = 1.0 - lambda;
  ctx.H = effective_horizon(lambda, eps, opts.max_depth);
  ctx.P_max = ctx.H;
  {
    double qp = std::pow(ctx.q, ctx.H);
    int cap = ctx.H + 1000000;
    while (qp > 1e-18 && ctx.P_max < cap) {
      qp *= ctx.q;
      ++ctx.P_max;
    }
  }
  ctx.qpow.resize(static_cast<size_t>(ctx.P_max) + 1);
  ctx.qpow[0] = 1.0;
  for (int p = 1; p <= ctx.P_max; ++p)
    ctx.qpow[static_cast<size_t>(p)] = ctx.qpow[static_cast<size_t>(p) - 1] * ctx.q;
  ctx.v_lambda = discounted_value(model, lambda, opts.discount_tol).values;
  return ctx;
}

// Greedy successor by discounted value, lowest index on ties.
int greedy_successor(const DpModel& model, const std::vector<double>& v, int u) {
  int best = -1;
  double best_v = -std::numeric_limits<double>::infinity();
  for (int t : model.state(u).successors)
    if (v[static_cast<size_t>(t)] > best_v ||
        (v[static_cast<size_t>(t)] == best_v && t < best)) {
      best_v = v[static_cast<size_t>(t)];
      best = t;
    }
  return best;
}

double max_successor_value(const DpModel& model, const std::vector<double>& v, int u) {
  double best = -std::numeric_limits<double>::infinity();
  for (int t : model.state(u).successors)
    best = std::max(best, v[static_cast<size_t>(t)]);
  return best;
}

// Enumerates eps-optimal play classes for the discounted program at one
// start: every depth-H prefix extendable to a play with discounted sum at
// least v_lambda(start) - eps, each evaluated through its value-greedy
// completion. Emission order is lexicographic in successor choices.
CellResult run_discounted_cell(const DpModel& model, const DiscountedContext& ctx,
                               const std::vector<double>& ref,
                               const std::vector<double>& grid, int start,
                               double eps, long long limit) {
  CellResult cell;
  CheckRow& row = cell.row;
  row.horizon = ctx.H;
  row.lambda = ctx.lambda;
  row.state = start;
  row.grid_dev.assign(grid.size(), 0.0);

  const std::vector<double>& vl = ctx.v_lambda;
  const double threshold = vl[static_cast<size_t>(start)] - eps;
  const double v_ref = ref[static_cast<size_t>(start)];
  const int H = ctx.H;

  std::vector<int> seq{start};
  std::vector<double> C{0.0, ctx.lambda * model.state(start).payoff};
  struct Frame {
    size_t child = 0;
  };
  std::vector<Frame> frames(1);
  long long emitted = 0;

  std::vector<double> payoffs;  // reused representative buffer

  // Evaluates the class of the current depth-H prefix. Returns false to
  // abort once the limit is hit with another qualifying class found.
  auto emit_class = [&]() -> bool {
    int tail_state = seq.back();
    double best_tail = max_successor_value(model, vl, tail_state);
    if (C[static_cast<size_t>(H)] + ctx.qpow[static_cast<size_t>(H)] * best_tail <
        threshold)
      return true;  // no eps-optimal completion
    if (emitted == limit) {
      row.truncated = true;
      return false;
    }

    payoffs.clear();
    payoffs.reserve(static_cast<size_t>(ctx.P_max));
    std::vector<int> full = seq;
    full.reserve(static_cast<size_t>(ctx.P_max));
    for (int u : seq) payoffs.push_back(model.state(u).payoff);
    int cur = tail_state;
    for (int p = H + 1; p <= ctx.P_max; ++p) {
      cur = greedy_successor(model, vl, cur);
      full.push_back(cur);
      payoffs.push_back(model.state(cur).payoff);
    }

    DiscScan sc = scan_discounted(payoffs, ctx.lambda, v_ref);
    Play rep;
    rep.start = start;
    rep.sequence = std::move(full);
    rep.payoffs = payoffs;

    if (row.plays_examined == 0) {
      row.sup_dev = sc.sup;
      row.inf_dev = sc.inf;
      row.sup_t = sc.sup_t;
      row.inf_t = sc.inf_t;
    } else {
      if (sc.sup > row.sup_dev) {
        row.sup_dev = sc.sup;
        row.sup_t = sc.sup_t;
      }
      if (sc.inf < row.inf_dev) {
        row.inf_dev = sc.inf;
        row.inf_t = sc.inf_t;
      }
    }
    for (size_t i = 0; i < grid.size(); ++i) {
      double d = disc_deviation_at(sc, grid[i], v_ref);
      if (std::abs(d) > std::abs(row.grid_dev[i])) row.grid_dev[i] = d;
    }
    ++row.plays_examined;

    const double bound = 3.0 * eps;
    double best_d = 0.0, best_t = 0.0;
    for (auto [d, t] :
         {std::pair{sc.sup, sc.sup_t}, std::pair{sc.inf, sc.inf_t}}) {
      if (std::abs(d) <= bound) continue;
      if (auto w = attained_disc_exceedance(sc, v_ref, t, bound))
        if (std::abs(w->second) > std::abs(best_d)) {
          best_d = w->second;
          best_t = w->first;
        }
    }
    if (std::abs(best_d) > bound &&
        (!cell.witness || std::abs(best_d) > std::abs(cell.witness->deviation))) {
      cell.witness = Witness{std::move(rep), start, ctx.H, ctx.lambda, best_t, best_d};
    }
    ++emitted;
    return true;
  };

  if (H == 1) {
    emit_class();
    finish_row(row, eps);
    return cell;
  }

  while (!frames.empty()) {
    int d = static_cast<int>(frames.size());
    if (d == H) {
      if (!emit_class()) break;
      frames.pop_back();
      seq.pop_back();
      C.pop_back();
      continue;
    }
    Frame& fr = frames.back();
    const auto& succ = model.state(seq[static_cast<size_t>(d) - 1]).successors;
    if (fr.child < succ.size()) {
      int t = succ[fr.child++];
      // Best completion through t: C_d + q^d * v_lambda(t).
      double bound =
          C[static_cast<size_t>(d)] + ctx.qpow[static_cast<size_t>(d)] *
                                          vl[static_cast<size_t>(t)];
      if (bound < threshold - kPruneGuard) continue;
      seq.push_back(t);
      C.push_back(C[static_cast<size_t>(d)] +
                  ctx.lambda * ctx.qpow[static_cast<size_t>(d)] *
                      model.state(t).payoff);
      frames.push_back({});
    } else {
      frames.pop_back();
      seq.pop_back();
      C.pop_back();
    }
  }
  finish_row(row, eps);
  return cell;
}

void validate_discounted_witness(const DpModel& model, const DiscountedContext& ctx,
                                 double eps, const std::vector<double>& ref,
                                 const Witness& w) {
  if (!is_feasible(model, w.play))
    throw std::logic_error("witness play is not feasible");
  DiscScan sc = scan_discounted(w.play.payoffs, ctx.lambda,
                                ref[static_cast<size_t>(w.state)]);
  double total = sc.C.back();
  double threshold = ctx.v_lambda[static_cast<size_t>(w.state)] - eps;
  if (total < threshold - kPruneGuard)
    throw std::logic_error("witness play is not eps-optimal for the discounted program");
  if (std::abs(disc_deviation_at(sc, w.t, ref[static_cast<size_t>(w.state)])) <=
      3.0 * eps)
    throw std::logic_error("witness deviation does not exceed the bound");
}

}  // namespace

PReport check_property_Pprime(const DpModel& model, double eps,
                              const std::vector<double>& lambdas,
                              const std::vector<double>& grid, long long limit,
                              const CheckOptions& opts) {
  require(eps > 0.0, "epsilon must be positive");
  require(!lambdas.empty(), "at least one discount required");
  require(limit >= 1, "enumeration limit must be >= 1");
  for (double l : lambdas) require(l > 0.0 && l < 1.0, "discount must lie in (0,1)");
  check_grid(grid);

  PReport report;
  report.kind = PReport::Kind::kDiscounted;
  report.epsilon = eps;
  report.lambdas = lambdas;
  std::sort(report.lambdas.begin(), report.lambdas.end(), std::greater<>());
  report.lambdas.erase(std::unique(report.lambdas.begin(), report.lambdas.end()),
                       report.lambdas.end());
  report.starts = resolve_starts(model, opts);
  report.reference = resolve_reference(model, opts);
  report.grid = grid;

  struct LambdaBlock {
    DiscountedContext ctx;
    std::vector<CellResult> cells;
  };
  std::vector<LambdaBlock> blocks(report.lambdas.size());

  for (size_t li = 0; li < report.lambdas.size(); ++li) {
    LambdaBlock& blk = blocks[li];
    blk.ctx = make_context(model, report.lambdas[li], eps, opts);
    blk.cells.resize(report.starts.size());
    parallel_for(static_cast<int>(report.starts.size()), [&](int si) {
      blk.cells[static_cast<size_t>(si)] =
          run_discounted_cell(model, blk.ctx, report.reference, report.grid,
                              report.starts[static_cast<size_t>(si)], eps, limit);
    });
    report.coverage_margin =
        std::max(report.coverage_margin,
                 blk.ctx.qpow[static_cast<size_t>(blk.ctx.H)]);
  }

  std::vector<char> lambda_pass(report.lambdas.size(), 1);
  for (size_t li = 0; li < report.lambdas.size(); ++li)
    for (const CellResult& cell : blocks[li].cells) {
      report.rows.push_back(cell.row);
      report.partial_coverage = report.partial_coverage || cell.row.truncated;
      if (!cell.row.pass) lambda_pass[li] = 0;
    }

  // Discounts are examined in decreasing order; the smallest one plays
  // the role the largest horizon plays in the average check.
  if (!lambda_pass.back()) {
    report.verdict = "VIOLATED";
    const LambdaBlock& blk = blocks.back();
    for (const CellResult& cell : blk.cells)
      if (cell.witness &&
          (!report.witness ||
           std::abs(cell.witness->deviation) > std::abs(report.witness->deviation)))
        report.witness = cell.witness;
    if (!report.witness)
      throw std::logic_error("violated verdict without a witness");
    validate_discounted_witness(model, blk.ctx, eps, report.reference,
                                *report.witness);
  } else {
    report.verdict = "HOLDS";
    size_t first = report.lambdas.size() - 1;
    while (first > 0 && lambda_pass[first - 1]) --first;
    report.lambda0 = report.lambdas[first];
  }
  return report;
}

UniformProbe uniform_value_probe(const DpModel& model, int s, double eps, int N,
                                 int Nmax) {
  require(s >= 0 && s < model.num_states(), "state out of range");
  require(eps > 0.0, "epsilon must be positive");
  require(N >= 1 && N <= Nmax, "need 1 <= N <= Nmax");

  UniformProbe probe;
  probe.state = s;
  probe.epsilon = eps;
  probe.N = N;
  probe.Nmax = Nmax;

  ValueTable table = finite_values(model, Nmax);
  probe.v_ref = table.value(Nmax, s);
  probe.play = optimal_play(model, table, s, Nmax);

  std::vector<double> prefix(static_cast<size_t>(Nmax) + 1, 0.0);
  for (int m = 1; m <= Nmax; ++m)
    prefix[static_cast<size_t>(m)] =
        prefix[static_cast<size_t>(m) - 1] + probe.play.payoffs[static_cast<size_t>(m) - 1];

  probe.play_ok = true;
  probe.values_ok = true;
  for (int n = N; n <= Nmax; ++n) {
    if (probe.play_ok &&
        prefix[static_cast<size_t>(n)] < n * (probe.v_ref - eps)) {
      probe.play_ok = false;
      probe.first_fail_play = n;
    }
    if (probe.values_ok && table.total(n, s) > n * (probe.v_ref + eps)) {
      probe.values_ok = false;
      probe.first_fail_value = n;
    }
  }
  return probe;
}

}  // namespace trajlens
