#include "trajlens/dp_model.hpp"

#include <utility>

#include <json.hpp>

#include "trajlens/errors.hpp"
#include "trajlens/hashing.hpp"

namespace trajlens {

using nlohmann::json;

DpModel DpModel::create(std::vector<DpState> states) {
  DpModel m;
  m.states_ = std::move(states);
  const int n = m.num_states();
  if (n == 0) throw ModelError("model has no states");
  m.index_.reserve(static_cast<size_t>(n));
  for (int s = 0; s < n; ++s) {
    const DpState& st = m.states_[static_cast<size_t>(s)];
    if (st.id.empty()) throw ModelError("state " + std::to_string(s) + " has an empty id");
    if (!m.index_.emplace(st.id, s).second)
      throw ModelError("duplicate state id '" + st.id + "'");
    if (!(st.payoff >= 0.0 && st.payoff <= 1.0))
      throw ModelError("state '" + st.id + "' payoff " + std::to_string(st.payoff) +
                       " outside [0,1]");
    if (st.successors.empty())
      throw ModelError("state '" + st.id + "' has no successors");
    for (int t : st.successors)
      if (t < 0 || t >= n)
        throw ModelError("state '" + st.id + "' references out-of-range successor " +
                         std::to_string(t));
  }
  return m;
}

DpModel DpModel::from_json_text(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ModelError(std::string("invalid model JSON: ") + e.what());
  }
  if (!doc.is_object() || doc.value("type", "") != "dp")
    throw ModelError("model JSON must be an object with \"type\":\"dp\"");
  if (!doc.contains("states") || !doc["states"].is_array())
    throw ModelError("model JSON missing \"states\" array");

  // Successors are written as ids; resolve them in a second pass once the
  // document order has fixed every index.
  std::unordered_map<std::string, int> index;
  const json& arr = doc["states"];
  for (size_t s = 0; s < arr.size(); ++s) {
    const json& js = arr[s];
    if (!js.is_object() || !js.contains("id") || !js["id"].is_string())
      throw ModelError("state entry " + std::to_string(s) + " missing string \"id\"");
    index.emplace(js["id"].get<std::string>(), static_cast<int>(s));
  }
  std::vector<DpState> states;
  states.reserve(arr.size());
  for (size_t s = 0; s < arr.size(); ++s) {
    const json& js = arr[s];
    DpState st;
    st.id = js["id"].get<std::string>();
    if (!js.contains("payoff") || !js["payoff"].is_number())
      throw ModelError("state '" + st.id + "' missing numeric \"payoff\"");
    st.payoff = js["payoff"].get<double>();
    if (!js.contains("successors") || !js["successors"].is_array())
      throw ModelError("state '" + st.id + "' missing \"successors\" array");
    for (const json& jt : js["successors"]) {
      if (!jt.is_string())
        throw ModelError("state '" + st.id + "' has a non-string successor entry");
      auto it = index.find(jt.get<std::string>());
      if (it == index.end())
        throw ModelError("state '" + st.id + "' references unknown successor '" +
                         jt.get<std::string>() + "'");
      st.successors.push_back(it->second);
    }
    states.push_back(std::move(st));
  }
  return create(std::move(states));
}

std::string DpModel::to_json_text(int indent) const {
  json arr = json::array();
  for (const DpState& st : states_) {
    json js;
    js["id"] = st.id;
    js["payoff"] = st.payoff;
    json succ = json::array();
    for (int t : st.successors) succ.push_back(states_[static_cast<size_t>(t)].id);
    js["successors"] = std::move(succ);
    arr.push_back(std::move(js));
  }
  json doc;
  doc["type"] = "dp";
  doc["states"] = std::move(arr);
  return doc.dump(indent);
}

int DpModel::index_of(std::string_view id) const {
  auto opt = find(id);
  if (!opt) throw ModelError("unknown state id '" + std::string(id) + "'");
  return *opt;
}

std::optional<int> DpModel::find(std::string_view id) const {
  auto it = index_.find(std::string(id));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::uint64_t DpModel::content_hash() const { return fnv1a64(to_json_text()); }

double Play::total() const {
  double acc = 0.0;
  for (size_t i = payoffs.size(); i > 0; --i) acc += payoffs[i - 1];
  return acc;
}

Play make_play(const DpModel& model, std::vector<int> sequence) {
  if (sequence.empty()) throw ModelError("play must visit at least one state");
  Play p;
  p.start = sequence.front();
  p.sequence = std::move(sequence);
  p.payoffs.reserve(p.sequence.size());
  for (size_t i = 0; i < p.sequence.size(); ++i) {
    int s = p.sequence[i];
    if (s < 0 || s >= model.num_states())
      throw ModelError("play references out-of-range state " + std::to_string(s));
    if (i > 0) {
      const auto& succ = model.state(p.sequence[i - 1]).successors;
      bool ok = false;
      for (int t : succ)
        if (t == s) {
          ok = true;
          break;
        }
      if (!ok)
        throw ModelError("play step " + std::to_string(i) + " is not a successor move");
    }
    p.payoffs.push_back(model.state(s).payoff);
  }
  return p;
}

bool is_feasible(const DpModel& model, const Play& play) {
  if (play.sequence.empty()) return false;
  if (play.start != play.sequence.front()) return false;
  if (play.payoffs.size() != play.sequence.size()) return false;
  for (size_t i = 0; i < play.sequence.size(); ++i) {
    int s = play.sequence[i];
    if (s < 0 || s >= model.num_states()) return false;
    if (play.payoffs[i] != model.state(s).payoff) return false;
    if (i > 0) {
      const auto& succ = model.state(play.sequence[i - 1]).successors;
      bool ok = false;
      for (int t : succ)
        if (t == s) {
          ok = true;
          break;
        }
      if (!ok) return false;
    }
  }
  return true;
}

}  // namespace trajlens
