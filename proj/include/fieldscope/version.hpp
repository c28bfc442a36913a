#pragma once

namespace fieldscope {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace fieldscope
