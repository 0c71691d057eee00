#pragma once

#include <string_view>

namespace ves {

// Bumped whenever an output format or a model formula changes.
inline constexpr std::string_view model_version = "1.0.0";

}  // namespace ves
