#pragma once

namespace bgc {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace bgc
