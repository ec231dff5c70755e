#pragma once

namespace sqrtlab {

inline constexpr const char* kVersion = "1.0.0";
inline constexpr const char* kRngName = "mt19937_64";

}  // namespace sqrtlab
