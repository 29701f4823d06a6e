#pragma once

namespace popcorn {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace popcorn
