#pragma once

namespace trajlens {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace trajlens
