#pragma once

namespace disclab {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace disclab
