#pragma once

namespace nscert {

inline constexpr const char* kToolVersion = "certify 0.1.0";

}  // namespace nscert
