#pragma once

namespace boltzgain {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr const char* kArtifactName = "boltzgain";

} // namespace boltzgain
