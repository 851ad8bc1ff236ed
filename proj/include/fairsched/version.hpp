#pragma once

namespace fairsched {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace fairsched
