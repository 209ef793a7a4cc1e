#pragma once

namespace rdesn {

inline constexpr const char* kToolVersion = "0.1.0";

// Stamped into every persisted binary's sidecar; loads refuse a mismatch.
inline constexpr int kFormatVersion = 1;

}  // namespace rdesn
