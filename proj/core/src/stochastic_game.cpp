#include "trajlens/stochastic_game.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include <json.hpp>

#include "trajlens/errors.hpp"
#include "trajlens/hashing.hpp"
#include "trajlens/matrix_game.hpp"
#include "trajlens/parallel.hpp"

namespace trajlens {

using nlohmann::json;

namespace {

void check_payoff_range(double v, const std::string& id) {
  if (!(v >= -1.0 && v <= 1.0))
    throw ModelError("state '" + id + "' payoff " + std::to_string(v) +
                     " outside [-1,1]");
}

}  // namespace

ZsgModel ZsgModel::create(std::vector<ZsgState> states) {
  ZsgModel m;
  m.states_ = std::move(states);
  const int n = m.num_states();
  if (n == 0) throw ModelError("game has no states");
  m.index_.reserve(static_cast<size_t>(n));
  for (int s = 0; s < n; ++s) {
    const ZsgState& st = m.states_[static_cast<size_t>(s)];
    if (st.id.empty()) throw ModelError("state " + std::to_string(s) + " has an empty id");
    if (!m.index_.emplace(st.id, s).second)
      throw ModelError("duplicate state id '" + st.id + "'");
    if (st.absorbing) {
      check_payoff_range(st.rho, st.id);
      continue;
    }
    const int a1 = st.actions1();
    const int a2 = st.actions2();
    if (a1 < 1 || a2 < 1)
      throw ModelError("active state '" + st.id + "' needs a nonempty payoff matrix");
    if (static_cast<int>(st.next.size()) != a1)
      throw ModelError("state '" + st.id + "' transition table row count mismatch");
    for (int i = 0; i < a1; ++i) {
      if (static_cast<int>(st.payoff[static_cast<size_t>(i)].size()) != a2)
        throw ModelError("state '" + st.id + "' payoff matrix is ragged");
      if (static_cast<int>(st.next[static_cast<size_t>(i)].size()) != a2)
        throw ModelError("state '" + st.id + "' transition table column count mismatch");
      for (int j = 0; j < a2; ++j) {
        check_payoff_range(st.payoff[static_cast<size_t>(i)][static_cast<size_t>(j)],
                           st.id);
        const auto& dist = st.next[static_cast<size_t>(i)][static_cast<size_t>(j)];
        if (dist.empty())
          throw ModelError("state '" + st.id + "' has an empty transition distribution");
        double sum = 0.0;
        for (const ZsgTransition& tr : dist) {
          if (tr.state < 0 || tr.state >= n)
            throw ModelError("state '" + st.id + "' references out-of-range successor " +
                             std::to_string(tr.state));
          if (tr.prob < 0.0)
            throw ModelError("state '" + st.id + "' has a negative transition probability");
          sum += tr.prob;
        }
        if (std::abs(sum - 1.0) > 1e-12)
          throw ModelError("state '" + st.id + "' transition probabilities sum to " +
                           std::to_string(sum));
      }
    }
  }
  return m;
}

ZsgModel ZsgModel::from_json_text(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ModelError(std::string("invalid game JSON: ") + e.what());
  }
  if (!doc.is_object() || doc.value("type", "") != "zsg")
    throw ModelError("game JSON must be an object with \"type\":\"zsg\"");
  if (!doc.contains("states") || !doc["states"].is_array())
    throw ModelError("game JSON missing \"states\" array");

  std::unordered_map<std::string, int> index;
  const json& arr = doc["states"];
  for (size_t s = 0; s < arr.size(); ++s) {
    const json& js = arr[s];
    if (!js.is_object() || !js.contains("id") || !js["id"].is_string())
      throw ModelError("state entry " + std::to_string(s) + " missing string \"id\"");
    index.emplace(js["id"].get<std::string>(), static_cast<int>(s));
  }

  std::vector<ZsgState> states;
  states.reserve(arr.size());
  for (const json& js : arr) {
    ZsgState st;
    st.id = js["id"].get<std::string>();
    if (!js.contains("absorbing") || !js["absorbing"].is_boolean())
      throw ModelError("state '" + st.id + "' missing boolean \"absorbing\"");
    st.absorbing = js["absorbing"].get<bool>();
    if (st.absorbing) {
      if (!js.contains("rho") || !js["rho"].is_number())
        throw ModelError("absorbing state '" + st.id + "' missing numeric \"rho\"");
      st.rho = js["rho"].get<double>();
      states.push_back(std::move(st));
      continue;
    }
    if (!js.contains("payoff") || !js["payoff"].is_array())
      throw ModelError("active state '" + st.id + "' missing \"payoff\" matrix");
    for (const json& row : js["payoff"]) {
      std::vector<double> r;
      for (const json& v : row) {
        if (!v.is_number())
          throw ModelError("state '" + st.id + "' has a non-numeric payoff entry");
        r.push_back(v.get<double>());
      }
      st.payoff.push_back(std::move(r));
    }
    if (!js.contains("next") || !js["next"].is_array())
      throw ModelError("active state '" + st.id + "' missing \"next\" table");
    for (const json& row : js["next"]) {
      std::vector<std::vector<ZsgTransition>> r;
      for (const json& cell : row) {
        std::vector<ZsgTransition> dist;
        for (const json& jt : cell) {
          if (!jt.is_object() || !jt.contains("s") || !jt.contains("p"))
            throw ModelError("state '" + st.id +
                             "' transition entry needs \"s\" and \"p\"");
          auto it = index.find(jt["s"].get<std::string>());
          if (it == index.end())
            throw ModelError("state '" + st.id + "' references unknown successor '" +
                             jt["s"].get<std::string>() + "'");
          dist.push_back({it->second, jt["p"].get<double>()});
        }
        r.push_back(std::move(dist));
      }
      st.next.push_back(std::move(r));
    }
    states.push_back(std::move(st));
  }
  return create(std::move(states));
}

std::string ZsgModel::to_json_text(int indent) const {
  json arr = json::array();
  for (const ZsgState& st : states_) {
    json js;
    js["id"] = st.id;
    js["absorbing"] = st.absorbing;
    if (st.absorbing) {
      js["rho"] = st.rho;
    } else {
      js["payoff"] = st.payoff;
      json next = json::array();
      for (const auto& row : st.next) {
        json jrow = json::array();
        for (const auto& cell : row) {
          json jcell = json::array();
          for (const ZsgTransition& tr : cell) {
            json jt;
            jt["s"] = states_[static_cast<size_t>(tr.state)].id;
            jt["p"] = tr.prob;
            jcell.push_back(std::move(jt));
          }
          jrow.push_back(std::move(jcell));
        }
        next.push_back(std::move(jrow));
      }
      js["next"] = std::move(next);
    }
    arr.push_back(std::move(js));
  }
  json doc;
  doc["type"] = "zsg";
  doc["states"] = std::move(arr);
  return doc.dump(indent);
}

int ZsgModel::index_of(std::string_view id) const {
  auto opt = find(id);
  if (!opt) throw ModelError("unknown state id '" + std::string(id) + "'");
  return *opt;
}

std::optional<int> ZsgModel::find(std::string_view id) const {
  auto it = index_.find(std::string(id));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::uint64_t ZsgModel::content_hash() const { return fnv1a64(to_json_text()); }

std::vector<double> ZsgValueTable::values_at(int n) const {
  std::vector<double> v(static_cast<size_t>(num_states_));
  for (int s = 0; s < num_states_; ++s) v[static_cast<size_t>(s)] = value(n, s);
  return v;
}

namespace {

// Stage-game value with the continuation already folded into the matrix.
// Degenerate one-row/one-column stages bypass the matrix solver.
double stage_value(const std::vector<std::vector<double>>& m, int n_for_error,
                   const std::string& state_id) {
  const size_t rows = m.size();
  const size_t cols = m[0].size();
  if (cols == 1) {
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& r : m) best = std::max(best, r[0]);
    return best;
  }
  if (rows == 1) {
    double best = std::numeric_limits<double>::infinity();
    for (double v : m[0]) best = std::min(best, v);
    return best;
  }
  try {
    return solve_matrix_game(MatrixGame::from_rows(m)).value;
  } catch (const SingularGameError& e) {
    throw SingularGameError("stage (n=" + std::to_string(n_for_error) + ", state '" +
                            state_id + "'): " + e.what());
  }
}

}  // namespace

ZsgValueTable shapley_finite(const ZsgModel& game, int N) {
  if (N < 1) throw ModelError("horizon must be >= 1");
  const int ns = game.num_states();
  ZsgValueTable table(ns, N);

  std::vector<double> prev(static_cast<size_t>(ns), 0.0);
  for (int n = 1; n <= N; ++n) {
    parallel_for(ns, [&](int s) {
      const ZsgState& st = game.state(s);
      if (st.absorbing) {
        table.total(n, s) = n * st.rho;
        return;
      }
      std::vector<std::vector<double>> m = st.payoff;
      if (n > 1) {
        for (int i = 0; i < st.actions1(); ++i)
          for (int j = 0; j < st.actions2(); ++j) {
            double cont = 0.0;
            for (const ZsgTransition& tr :
                 st.next[static_cast<size_t>(i)][static_cast<size_t>(j)])
              cont += tr.prob * prev[static_cast<size_t>(tr.state)];
            m[static_cast<size_t>(i)][static_cast<size_t>(j)] += cont;
          }
      }
      table.total(n, s) = stage_value(m, n, st.id);
    });
    for (int s = 0; s < ns; ++s) prev[static_cast<size_t>(s)] = table.total(n, s);
  }
  return table;
}

DiscountedResult shapley_discounted(const ZsgModel& game, double lambda, double tol) {
  if (!(lambda > 0.0 && lambda < 1.0)) throw ModelError("discount must lie in (0,1)");
  if (!(tol > 0.0)) throw ModelError("tolerance must be positive");
  const int ns = game.num_states();

  auto apply = [&](const std::vector<double>& v) {
    std::vector<double> next(static_cast<size_t>(ns));
    parallel_for(ns, [&](int s) {
      const ZsgState& st = game.state(s);
      if (st.absorbing) {
        next[static_cast<size_t>(s)] = st.rho;
        return;
      }
      std::vector<std::vector<double>> m = st.payoff;
      for (int i = 0; i < st.actions1(); ++i)
        for (int j = 0; j < st.actions2(); ++j) {
          double cont = 0.0;
          for (const ZsgTransition& tr :
               st.next[static_cast<size_t>(i)][static_cast<size_t>(j)])
            cont += tr.prob * v[static_cast<size_t>(tr.state)];
          m[static_cast<size_t>(i)][static_cast<size_t>(j)] =
              lambda * m[static_cast<size_t>(i)][static_cast<size_t>(j)] +
              (1.0 - lambda) * cont;
        }
      next[static_cast<size_t>(s)] = stage_value(m, -1, st.id);
    });
    return next;
  };

  DiscountedResult out;
  std::vector<double> v(static_cast<size_t>(ns), 0.0);
  for (;;) {
    std::vector<double> next = apply(v);
    ++out.iterations;
    double diff = 0.0;
    for (int s = 0; s < ns; ++s)
      diff = std::max(diff,
                      std::abs(next[static_cast<size_t>(s)] - v[static_cast<size_t>(s)]));
    v = std::move(next);
    if (diff <= tol) break;
  }
  std::vector<double> check = apply(v);
  double res = 0.0;
  for (int s = 0; s < ns; ++s)
    res = std::max(res,
                   std::abs(check[static_cast<size_t>(s)] - v[static_cast<size_t>(s)]));
  out.values = std::move(check);
  out.residual = res;
  return out;
}

MarkovProfile stationary_profile(int stages, std::vector<std::vector<double>> per_state) {
  if (stages < 1) throw ModelError("profile needs at least one stage");
  MarkovProfile p;
  p.action.assign(static_cast<size_t>(stages), per_state);
  return p;
}

namespace {

void check_profile(const ZsgModel& game, const MarkovProfile& prof, int n,
                   bool player1, const char* name) {
  if (prof.stages() < n)
    throw ModelError(std::string(name) + " profile covers fewer stages than the horizon");
  for (int k = 0; k < n; ++k) {
    const auto& stage = prof.action[static_cast<size_t>(k)];
    if (static_cast<int>(stage.size()) != game.num_states())
      throw ModelError(std::string(name) + " profile stage " + std::to_string(k + 1) +
                       " does not cover every state");
    for (int s = 0; s < game.num_states(); ++s) {
      const ZsgState& st = game.state(s);
      const auto& mix = stage[static_cast<size_t>(s)];
      if (st.absorbing) {
        if (!mix.empty())
          throw ModelError(std::string(name) + " profile assigns actions to absorbing '" +
                           st.id + "'");
        continue;
      }
      const int want = player1 ? st.actions1() : st.actions2();
      if (static_cast<int>(mix.size()) != want)
        throw ModelError(std::string(name) + " profile action count mismatch at '" +
                         st.id + "'");
      double sum = 0.0;
      for (double v : mix) {
        if (v < 0.0)
          throw ModelError(std::string(name) + " profile has a negative weight at '" +
                           st.id + "'");
        sum += v;
      }
      if (std::abs(sum - 1.0) > 1e-12)
        throw ModelError(std::string(name) + " profile mix at '" + st.id +
                         "' sums to " + std::to_string(sum));
    }
  }
}

}  // namespace

ProfileEvaluation eval_profile_detailed(const ZsgModel& game,
                                        const MarkovProfile& sigma,
                                        const MarkovProfile& tau, int start, int n) {
  if (start < 0 || start >= game.num_states())
    throw ModelError("start state out of range");
  if (n < 1) throw ModelError("horizon must be >= 1");
  check_profile(game, sigma, n, true, "player 1");
  check_profile(game, tau, n, false, "player 2");

  const int ns = game.num_states();
  ProfileEvaluation out;
  out.cumulative.resize(static_cast<size_t>(n));
  out.dist.reserve(static_cast<size_t>(n) + 1);

  std::vector<double> dist(static_cast<size_t>(ns), 0.0);
  dist[static_cast<size_t>(start)] = 1.0;
  out.dist.push_back(dist);

  double cum = 0.0;
  for (int k = 1; k <= n; ++k) {
    const auto& sk = sigma.action[static_cast<size_t>(k) - 1];
    const auto& tk = tau.action[static_cast<size_t>(k) - 1];
    double stage = 0.0;
    std::vector<double> next(static_cast<size_t>(ns), 0.0);
    for (int s = 0; s < ns; ++s) {
      const double mass = dist[static_cast<size_t>(s)];
      if (mass == 0.0) continue;
      const ZsgState& st = game.state(s);
      if (st.absorbing) {
        stage += mass * st.rho;
        next[static_cast<size_t>(s)] += mass;
        continue;
      }
      const auto& mix1 = sk[static_cast<size_t>(s)];
      const auto& mix2 = tk[static_cast<size_t>(s)];
      double rate = 0.0;
      for (int i = 0; i < st.actions1(); ++i) {
        if (mix1[static_cast<size_t>(i)] == 0.0) continue;
        double inner = 0.0;
        for (int j = 0; j < st.actions2(); ++j)
          inner += mix2[static_cast<size_t>(j)] *
                   st.payoff[static_cast<size_t>(i)][static_cast<size_t>(j)];
        rate += mix1[static_cast<size_t>(i)] * inner;
      }
      stage += mass * rate;
      for (int i = 0; i < st.actions1(); ++i) {
        if (mix1[static_cast<size_t>(i)] == 0.0) continue;
        for (int j = 0; j < st.actions2(); ++j) {
          double w = mass * mix1[static_cast<size_t>(i)] * mix2[static_cast<size_t>(j)];
          if (w == 0.0) continue;
          for (const ZsgTransition& tr :
               st.next[static_cast<size_t>(i)][static_cast<size_t>(j)])
            next[static_cast<size_t>(tr.state)] += w * tr.prob;
        }
      }
    }
    cum += stage;
    out.cumulative[static_cast<size_t>(k) - 1] = cum;
    dist = std::move(next);
    out.dist.push_back(dist);
  }
  return out;
}

std::vector<double> eval_profile(const ZsgModel& game, const MarkovProfile& sigma,
                                 const MarkovProfile& tau, int start, int n) {
  return eval_profile_detailed(game, sigma, tau, start, n).cumulative;
}

DeviationProfile expected_deviation_profile(const ZsgModel& game,
                                            const MarkovProfile& sigma,
                                            const MarkovProfile& tau, int start,
                                            int n, double v_ref,
                                            const std::vector<double>& grid) {
  std::vector<double> cumulative = eval_profile(game, sigma, tau, start, n);
  std::vector<double> prefix(static_cast<size_t>(n) + 1, 0.0);
  for (int k = 1; k <= n; ++k)
    prefix[static_cast<size_t>(k)] = cumulative[static_cast<size_t>(k) - 1];
  return deviation_profile_from_prefix(std::move(prefix), start, v_ref, grid);
}

std::pair<MarkovProfile, MarkovProfile> profiles_from_json_text(const ZsgModel& game,
                                                                std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ModelError(std::string("invalid profile JSON: ") + e.what());
  }
  if (!doc.is_object() || doc.value("type", "") != "profiles")
    throw ModelError("profile JSON must be an object with \"type\":\"profiles\"");
  if (!doc.contains("stages") || !doc["stages"].is_number_integer())
    throw ModelError("profile JSON missing integer \"stages\"");
  const int stages = doc["stages"].get<int>();
  if (stages < 1) throw ModelError("profile needs at least one stage");

  auto parse_player = [&](const char* key, bool player1) {
    if (!doc.contains(key) || !doc[key].is_array() || doc[key].empty())
      throw ModelError(std::string("profile JSON missing nonempty \"") + key +
                       "\" array");
    const json& arr = doc[key];
    if (arr.size() != 1 && static_cast<int>(arr.size()) != stages)
      throw ModelError(std::string("\"") + key +
                       "\" must have one entry (stationary) or one per stage");
    MarkovProfile prof;
    prof.action.resize(static_cast<size_t>(stages));
    for (int k = 0; k < stages; ++k) {
      const json& stage = arr[arr.size() == 1 ? 0 : static_cast<size_t>(k)];
      if (!stage.is_object())
        throw ModelError(std::string("\"") + key + "\" stage entries must be objects");
      auto& out = prof.action[static_cast<size_t>(k)];
      out.resize(static_cast<size_t>(game.num_states()));
      for (int s = 0; s < game.num_states(); ++s) {
        const ZsgState& st = game.state(s);
        if (st.absorbing) continue;
        if (!stage.contains(st.id))
          throw ModelError(std::string(key) + " stage " + std::to_string(k + 1) +
                           " missing active state '" + st.id + "'");
        const json& mix = stage[st.id];
        if (!mix.is_array())
          throw ModelError(std::string(key) + " mix for '" + st.id +
                           "' must be an array");
        for (const json& v : mix)
          out[static_cast<size_t>(s)].push_back(v.get<double>());
      }
    }
    check_profile(game, prof, stages, player1, key);
    return prof;
  };

  return {parse_player("p1", true), parse_player("p2", false)};
}

}  // namespace trajlens
