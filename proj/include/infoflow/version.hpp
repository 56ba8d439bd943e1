#pragma once

namespace infoflow {

inline constexpr const char* kToolkitVersion = "1.0.0";
inline constexpr int kArtifactFormat = 1;

}  // namespace infoflow
