#pragma once

namespace dmt {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace dmt
