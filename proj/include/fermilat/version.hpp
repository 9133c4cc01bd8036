#pragma once

namespace fermilat {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace fermilat
