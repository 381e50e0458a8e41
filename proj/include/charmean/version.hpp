#pragma once

namespace charmean {

inline constexpr const char* kToolVersion = "0.1.0";

}  // namespace charmean
