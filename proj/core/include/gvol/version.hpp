#pragma once

namespace gvol {
inline constexpr const char* kVersion = "0.1.0";
}
