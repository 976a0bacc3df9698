#pragma once

namespace tausim {

inline constexpr const char* version = "0.1.0";

}  // namespace tausim
