#pragma once

namespace tailrisk {

inline constexpr const char* tool_version = "1.0.0";

}  // namespace tailrisk
