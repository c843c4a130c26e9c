#pragma once

namespace oqhn {
inline constexpr const char* version = "0.1.0";
}
