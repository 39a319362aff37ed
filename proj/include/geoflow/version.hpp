#pragma once

namespace geoflow {

inline constexpr const char* kToolVersion = "0.1.0";

}  // namespace geoflow
