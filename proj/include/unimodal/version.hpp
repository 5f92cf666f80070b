#pragma once

#include <string_view>

namespace unimodal {

inline constexpr std::string_view kToolName = "unimodal";
inline constexpr std::string_view kVersion = "0.1.0";

} // namespace unimodal
