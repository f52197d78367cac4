#pragma once

namespace grassmu {

inline constexpr const char* toolkit_name = "grassmann-mu";
inline constexpr const char* toolkit_version = "0.1.0";

}  // namespace grassmu
