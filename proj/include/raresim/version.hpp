#pragma once

namespace raresim {
inline constexpr const char* kVersion = "0.1.0";
}
