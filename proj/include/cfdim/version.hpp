#pragma once

namespace cfdim {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace cfdim
