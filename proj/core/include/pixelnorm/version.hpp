#pragma once

namespace pixelnorm {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace pixelnorm
