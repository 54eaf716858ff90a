#pragma once

namespace quadlind {

inline constexpr const char kVersion[] = "0.1.0";

}  // namespace quadlind
