#pragma once

namespace gridcell {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace gridcell
