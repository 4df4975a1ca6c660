#pragma once

namespace heisenvt {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr const char* kToolName = "heisenvt";

} // namespace heisenvt
