#pragma once

namespace tomo {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace tomo
