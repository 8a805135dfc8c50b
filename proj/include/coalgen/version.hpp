#pragma once

namespace coalgen {

inline constexpr const char* tool_name = "coalgen";
inline constexpr const char* tool_version = "0.1.0";

}  // namespace coalgen
