#pragma once

namespace tailasym {
inline constexpr const char* kVersion = "1.0.0";
}
