#include "trajlens/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <unordered_map>

#include "trajlens/dp_values.hpp"
#include "trajlens/errors.hpp"

namespace trajlens {

namespace {

double nan_value() { return std::numeric_limits<double>::quiet_NaN(); }

void verify(bool ok, const char* what) {
  if (!ok) throw std::logic_error(std::string("corpus self-check failed: ") + what);
}

CorpusEntry build_ls(int K) {
  if (K < 2) throw ModelError("truncation depth must be >= 2");
  // Layout: spine a_1..a_K, then chains b_{k,1..k} grouped by k, then sink.
  const int spine = K;
  auto chain_base = [&](int k) { return spine + (k - 1) * k / 2; };
  const int sink = spine + K * (K + 1) / 2;

  std::vector<DpState> states(static_cast<size_t>(sink) + 1);
  for (int k = 1; k <= K; ++k) {
    DpState& a = states[static_cast<size_t>(k) - 1];
    a.id = "a" + std::to_string(k);
    a.payoff = 0.0;
    if (k < K) a.successors = {k, chain_base(k)};
    else a.successors = {chain_base(K)};
    for (int j = 1; j <= k; ++j) {
      DpState& b = states[static_cast<size_t>(chain_base(k) + j - 1)];
      b.id = "b" + std::to_string(k) + "_" + std::to_string(j);
      b.payoff = 1.0;
      b.successors = {j < k ? chain_base(k) + j : sink};
    }
  }
  states[static_cast<size_t>(sink)] = {"sink", 0.0, {sink}};

  CorpusEntry e;
  e.name = "ls-nonregular";
  e.params = {{"K", static_cast<double>(K)}};
  e.dp_model = DpModel::create(std::move(states));
  e.start_ids = {"a1"};
  e.analytic_limit.assign(static_cast<size_t>(sink) + 1, 0.0);
  for (int k = 1; k <= K; ++k) e.analytic_limit[static_cast<size_t>(k) - 1] = 0.5;
  e.vn_exact = [K](int s, int n) {
    if (s != 0 || n < 1) return nan_value();
    int best = 0;
    for (int k = 1; k <= std::min(K, n); ++k) best = std::max(best, std::min(k, n - k));
    return static_cast<double>(best) / n;
  };
  e.expected_p_verdict = "VIOLATED";
  e.notes =
      "Zero-payoff spine with one-payoff chains; even-horizon values at a1 "
      "are exactly 1/2 up to 2K, with a unique optimal play of K zeros then "
      "K ones.";
  return e;
}

void verify_ls_family() {
  static const bool done = [] {
    CorpusEntry e = build_ls(3);
    const DpModel& m = e.dp();
    ValueTable t = finite_values(m, 6);
    const int a1 = m.index_of("a1");
    verify(t.value(4, a1) == 0.5, "4-stage value at a1");
    verify(t.value(5, a1) == 2.0 / 5.0, "5-stage value at a1");
    verify(t.value(6, a1) == 0.5, "6-stage value at a1");
    verify(t.value(3, m.index_of("sink")) == 0.0, "sink value");
    verify(check_monotone_limit(m, e.analytic_limit, 0.0).empty(),
           "limit monotone along moves");
    return true;
  }();
  (void)done;
}

CorpusEntry build_big_match() {
  std::vector<ZsgState> states(3);
  ZsgState& bm = states[0];
  bm.id = "bm";
  bm.payoff = {{1.0, 0.0}, {0.0, 1.0}};
  bm.next = {{{{1, 1.0}}, {{2, 1.0}}}, {{{0, 1.0}}, {{0, 1.0}}}};
  states[1] = {"abs1", true, 1.0, {}, {}};
  states[2] = {"abs0", true, 0.0, {}, {}};

  CorpusEntry e;
  e.name = "big-match";
  e.zsg_model = ZsgModel::create(std::move(states));
  e.start_ids = {"bm"};
  e.analytic_limit = {0.5, 1.0, 0.0};
  e.vn_exact = [](int s, int) {
    switch (s) {
      case 0: return 0.5;
      case 1: return 1.0;
      case 2: return 0.0;
      default: return nan_value();
    }
  };
  e.notes =
      "Row a absorbs at 1 or 0 depending on the column, row b keeps playing; "
      "every horizon's value is 1/2 and the column player's stationary "
      "(1/2,1/2) guarantees it.";
  return e;
}

void verify_big_match_family() {
  static const bool done = [] {
    CorpusEntry e = build_big_match();
    const ZsgModel& g = e.zsg();
    ZsgValueTable t = shapley_finite(g, 3);
    for (int n = 1; n <= 3; ++n) {
      verify(std::abs(t.value(n, 0) - 0.5) <= 1e-12, "start value 1/2");
      verify(t.value(n, 1) == 1.0, "absorbing value 1");
      verify(t.value(n, 2) == 0.0, "absorbing value 0");
    }
    return true;
  }();
  (void)done;
}

CorpusEntry build_gamma(int n_max) {
  if (n_max < 1) throw ModelError("block count must be >= 1");
  std::vector<ZsgState> states;
  std::vector<std::string> ids;
  ids.push_back("root");
  for (int n = 1; n <= n_max; ++n)
    for (int m = 1; m <= n; ++m)
      ids.push_back("g" + std::to_string(2 * n) + "_" + std::to_string(m));
  for (int n = 1; n <= n_max; ++n)
    for (int m = 1; m <= n; ++m)
      ids.push_back("abs" + std::to_string(2 * n) + "_" + std::to_string(m));
  ids.push_back("term");
  std::unordered_map<std::string, int> at;
  for (size_t i = 0; i < ids.size(); ++i) at.emplace(ids[i], static_cast<int>(i));

  auto fraction = [](int two_n, int m) {
    return static_cast<double>(-(m - 1)) / (two_n - (m - 1));
  };

  states.resize(ids.size());
  ZsgState& root = states[0];
  root.id = "root";
  root.payoff.assign(static_cast<size_t>(n_max), {0.0});
  root.next.resize(static_cast<size_t>(n_max));
  for (int n = 1; n <= n_max; ++n)
    root.next[static_cast<size_t>(n) - 1] = {
        {{at["g" + std::to_string(2 * n) + "_1"], 1.0}}};

  for (int n = 1; n <= n_max; ++n) {
    for (int m = 1; m <= n; ++m) {
      const std::string gid = "g" + std::to_string(2 * n) + "_" + std::to_string(m);
      const std::string aid = "abs" + std::to_string(2 * n) + "_" + std::to_string(m);
      const double x = fraction(2 * n, m);
      ZsgState& st = states[static_cast<size_t>(at[gid])];
      st.id = gid;
      st.payoff = {{1.0, x}, {x, x}};
      const int coop = m < n ? at["g" + std::to_string(2 * n) + "_" + std::to_string(m + 1)]
                             : at["term"];
      const int quit = at[aid];
      st.next = {{{{coop, 1.0}}, {{quit, 1.0}}}, {{{quit, 1.0}}, {{quit, 1.0}}}};
      states[static_cast<size_t>(at[aid])] = {aid, true, x, {}, {}};
    }
  }
  states[static_cast<size_t>(at["term"])] = {"term", true, -1.0, {}, {}};

  CorpusEntry e;
  e.name = "gamma";
  e.params = {{"n_max", static_cast<double>(n_max)}};
  e.zsg_model = ZsgModel::create(std::move(states));
  e.start_ids = {"root"};
  e.analytic_limit.assign(ids.size(), 0.0);
  for (int n = 1; n <= n_max; ++n)
    for (int m = 1; m <= n; ++m) {
      const double x = fraction(2 * n, m);
      e.analytic_limit[static_cast<size_t>(
          e.zsg().index_of("g" + std::to_string(2 * n) + "_" + std::to_string(m)))] = x;
      e.analytic_limit[static_cast<size_t>(e.zsg().index_of(
          "abs" + std::to_string(2 * n) + "_" + std::to_string(m)))] = x;
    }
  e.analytic_limit[static_cast<size_t>(e.zsg().index_of("term"))] = -1.0;
  // Every state's n-stage value is independent of n here.
  std::vector<double> limits = e.analytic_limit;
  e.vn_exact = [limits](int s, int) {
    if (s < 0 || s >= static_cast<int>(limits.size())) return nan_value();
    return limits[static_cast<size_t>(s)];
  };
  e.notes =
      "Player 1 picks a block at the root; block 2n is a chain of n jointly "
      "controlled stages paying 1 on cooperation, with every unilateral move "
      "absorbing at the fraction that zeroes the path total.";
  return e;
}

void verify_gamma_family() {
  static const bool done = [] {
    for (const GammaFraction& f : gamma_fractions(4))
      verify((f.m - 1) * f.den + (f.two_n - (f.m - 1)) * f.num == 0,
             "absorbing fraction identity");
    CorpusEntry e = build_gamma(2);
    const ZsgModel& g = e.zsg();
    ZsgValueTable t = shapley_finite(g, 5);
    for (int n = 1; n <= 5; ++n)
      verify(std::abs(t.value(n, g.index_of("root"))) <= 1e-12, "root value 0");
    return true;
  }();
  (void)done;
}

std::vector<CorpusEntry> build_regulars() {
  std::vector<CorpusEntry> out;

  {
    std::vector<DpState> states(2);
    states[0] = {"s0", 0.0, {0, 1}};
    states[1] = {"s1", 1.0, {1}};
    CorpusEntry e;
    e.name = "two-state-chain";
    e.dp_model = DpModel::create(std::move(states));
    e.start_ids = {"s0", "s1"};
    e.analytic_limit = {1.0, 1.0};
    e.vn_exact = [](int s, int n) {
      if (s == 0) return static_cast<double>(n - 1) / n;
      if (s == 1) return 1.0;
      return nan_value();
    };
    e.expected_p_verdict = "HOLDS";
    e.expected_pprime_verdict = "HOLDS";
    e.notes = "Jump from a zero state to an absorbing one state.";
    out.push_back(std::move(e));
  }

  {
    std::vector<DpState> states(3);
    states[0] = {"c0", 0.0, {1}};
    states[1] = {"c1", 1.0, {2}};
    states[2] = {"c2", 1.0, {0}};
    CorpusEntry e;
    e.name = "three-cycle";
    e.dp_model = DpModel::create(std::move(states));
    e.start_ids = {"c0", "c1", "c2"};
    const double third = 2.0 / 3.0;
    e.analytic_limit = {third, third, third};
    e.vn_exact = [](int s, int n) {
      if (s < 0 || s > 2 || n < 1) return nan_value();
      static const int pattern[3] = {0, 1, 1};
      int total = 0;
      for (int m = 0; m < n; ++m) total += pattern[(s + m) % 3];
      return static_cast<double>(total) / n;
    };
    e.expected_p_verdict = "HOLDS";
    e.expected_pprime_verdict = "HOLDS";
    e.notes = "Forced deterministic cycle with payoffs 0,1,1.";
    out.push_back(std::move(e));
  }

  {
    std::vector<DpState> states(4);
    const double payoffs[4] = {0.0, 0.25, 0.5, 1.0};
    for (int s = 0; s < 4; ++s)
      states[static_cast<size_t>(s)] = {"p" + std::to_string(s), payoffs[s], {s}};
    CorpusEntry e;
    e.name = "all-absorbing";
    e.dp_model = DpModel::create(std::move(states));
    e.start_ids = {"p0", "p1", "p2", "p3"};
    e.analytic_limit = {0.0, 0.25, 0.5, 1.0};
    std::vector<double> f(payoffs, payoffs + 4);
    e.vn_exact = [f](int s, int) {
      if (s < 0 || s >= 4) return nan_value();
      return f[static_cast<size_t>(s)];
    };
    e.expected_p_verdict = "HOLDS";
    e.expected_pprime_verdict = "HOLDS";
    e.notes = "Every state self-loops; values equal payoffs at all horizons.";
    out.push_back(std::move(e));
  }

  return out;
}

void verify_regular_family() {
  static const bool done = [] {
    std::vector<CorpusEntry> entries = build_regulars();
    for (const CorpusEntry& e : entries) {
      const DpModel& m = e.dp();
      verify(check_monotone_limit(m, e.analytic_limit, 0.0).empty(),
             "limit monotone along moves");
      ValueTable t = finite_values(m, 6);
      for (int s = 0; s < m.num_states(); ++s)
        for (int n = 1; n <= 6; ++n)
          verify(t.value(n, s) == e.vn_exact(s, n), "closed-form n-stage value");
      std::vector<double> oracle = max_mean_cycle_values(m);
      for (int s = 0; s < m.num_states(); ++s)
        verify(oracle[static_cast<size_t>(s)] == e.analytic_limit[static_cast<size_t>(s)],
               "cycle oracle matches limit");
    }
    return true;
  }();
  (void)done;
}

}  // namespace

const DpModel& CorpusEntry::dp() const {
  if (!dp_model) throw ModelError("corpus entry '" + name + "' is not a DP model");
  return *dp_model;
}

const ZsgModel& CorpusEntry::zsg() const {
  if (!zsg_model)
    throw ModelError("corpus entry '" + name + "' is not a stochastic game");
  return *zsg_model;
}

std::vector<int> CorpusEntry::start_indices() const {
  std::vector<int> out;
  out.reserve(start_ids.size());
  for (const std::string& id : start_ids)
    out.push_back(dp_model ? dp_model->index_of(id) : zsg().index_of(id));
  return out;
}

CorpusEntry ls_nonregular(int K) {
  verify_ls_family();
  return build_ls(K);
}

CorpusEntry big_match() {
  verify_big_match_family();
  return build_big_match();
}

CorpusEntry gamma_game(int n_max) {
  verify_gamma_family();
  return build_gamma(n_max);
}

std::vector<CorpusEntry> simple_regulars() {
  verify_regular_family();
  return build_regulars();
}

std::vector<GammaFraction> gamma_fractions(int n_max) {
  std::vector<GammaFraction> out;
  for (int n = 1; n <= n_max; ++n)
    for (int m = 1; m <= n; ++m)
      out.push_back({2 * n, m, -(m - 1), 2LL * n - (m - 1)});
  return out;
}

std::vector<std::string> corpus_names() {
  return {"ls-nonregular", "big-match",   "gamma",
          "two-state-chain", "three-cycle", "all-absorbing"};
}

CorpusEntry make_corpus_entry(const std::string& name,
                              const std::vector<std::pair<std::string, double>>& params) {
  auto get_param = [&](const std::string& key, double fallback) {
    double v = fallback;
    for (const auto& [k, val] : params) {
      if (k == key) {
        v = val;
      } else {
        throw ModelError("corpus '" + name + "' does not take parameter '" + k + "'");
      }
    }
    return v;
  };
  auto no_params = [&] {
    if (!params.empty())
      throw ModelError("corpus '" + name + "' does not take parameters");
  };

  if (name == "ls-nonregular")
    return ls_nonregular(static_cast<int>(get_param("K", 50)));
  if (name == "gamma") return gamma_game(static_cast<int>(get_param("n_max", 10)));
  if (name == "big-match") {
    no_params();
    return big_match();
  }
  for (CorpusEntry& e : simple_regulars())
    if (e.name == name) {
      no_params();
      return std::move(e);
    }
  throw ModelError("unknown corpus entry '" + name + "'");
}

}  // namespace trajlens
