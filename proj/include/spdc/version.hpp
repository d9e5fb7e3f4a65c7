#pragma once

namespace spdc {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr const char* kToolName = "spdc";

} // namespace spdc
