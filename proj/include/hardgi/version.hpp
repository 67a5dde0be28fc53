#pragma once

namespace hardgi {

inline constexpr const char* kToolVersion = "hardgi 0.1.0";

}  // namespace hardgi
