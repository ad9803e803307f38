#pragma once

namespace swarmnews {

inline constexpr const char* kVersion = "swarmnews 0.1.0";

}  // namespace swarmnews
