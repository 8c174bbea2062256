#pragma once

namespace abm {
inline constexpr const char* tool_version = "0.1.0";
}
