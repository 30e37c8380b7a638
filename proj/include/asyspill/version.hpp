#pragma once

namespace asyspill {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace asyspill
