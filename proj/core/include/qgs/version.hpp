#pragma once

namespace qgs {

inline constexpr const char* kVersion = "0.1.0";

} // namespace qgs
