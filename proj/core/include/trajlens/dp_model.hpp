#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace trajlens {

// One state of a deterministic dynamic programming problem: a payoff in
// [0,1] and a nonempty ordered list of successor states.
struct DpState {
  std::string id;
  double payoff = 0.0;
  std::vector<int> successors;
};

// Finite dynamic programming problem. Immutable after construction; all
// solver operations are pure functions of a model, so sharing one across
// threads is safe.
class DpModel {
 public:
  DpModel() = default;

  // Validates and adopts the state list. Throws ModelError naming the
  // offending state on duplicate ids, dangling successor indices, empty
  // successor lists, or payoffs outside [0,1].
  static DpModel create(std::vector<DpState> states);

  // Parses {"type":"dp","states":[{"id","payoff","successors":[ids]},...]}.
  // State order in the document fixes the indices.
  static DpModel from_json_text(std::string_view text);
  std::string to_json_text(int indent = -1) const;

  int num_states() const { return static_cast<int>(states_.size()); }
  const DpState& state(int s) const { return states_[static_cast<size_t>(s)]; }
  const std::vector<DpState>& states() const { return states_; }

  // Index of the state with the given id; throws ModelError if absent.
  int index_of(std::string_view id) const;
  std::optional<int> find(std::string_view id) const;

  // FNV-1a hash of the canonical JSON form, for report provenance.
  std::uint64_t content_hash() const;

 private:
  std::vector<DpState> states_;
  std::unordered_map<std::string, int> index_;
};

// A feasible play: states s_1..s_n with s_1 = start and each step moving
// to a successor, together with the induced payoff stream.
struct Play {
  int start = 0;
  std::vector<int> sequence;
  std::vector<double> payoffs;

  int horizon() const { return static_cast<int>(sequence.size()); }

  // Total payoff, accumulated from the last stage backwards so that a
  // value-greedy play reproduces the recursion's total bit for bit.
  double total() const;
};

// Builds a Play from a state sequence, filling payoffs. Throws ModelError
// if the sequence is empty or infeasible.
Play make_play(const DpModel& model, std::vector<int> sequence);

// True when the sequence is nonempty, stays in range, follows the
// successor correspondence, and the payoff stream matches the model.
bool is_feasible(const DpModel& model, const Play& play);

}  // namespace trajlens
