#pragma once

namespace schlab {

inline constexpr const char* kVersion = "0.1.0";

}
