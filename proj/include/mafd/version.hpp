#pragma once

namespace mafd {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace mafd
