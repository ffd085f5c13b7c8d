#pragma once

namespace throwbox {

inline constexpr const char* kVersion = "0.3.0";

}  // namespace throwbox
