#pragma once

namespace kab {
inline constexpr const char* kVersion = "0.1.0";
}
