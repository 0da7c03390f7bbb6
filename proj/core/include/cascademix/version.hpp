#pragma once

namespace cascademix {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace cascademix
