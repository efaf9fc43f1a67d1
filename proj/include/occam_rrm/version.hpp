#pragma once

#include <string_view>

namespace occam_rrm {

inline constexpr std::string_view kVersion = "0.1.0";

} // namespace occam_rrm
