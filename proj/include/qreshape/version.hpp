#pragma once

namespace qreshape {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace qreshape
