#pragma once

#include <stdexcept>
#include <string>

namespace trajlens {

// Invalid model data or out-of-range arguments. The message names the
// offending state id or field.
class ModelError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// No support pair produced a certified matrix-game solution within
// tolerance. Signals ill-conditioned input.
class SingularGameError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The discounted enumeration cannot extend plays far enough to keep the
// truncation error below epsilon/10.
class EffectiveHorizonError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace trajlens
