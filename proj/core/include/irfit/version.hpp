#pragma once

namespace irfit {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace irfit
