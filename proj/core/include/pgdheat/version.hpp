#pragma once

namespace pgdheat {

inline constexpr const char* kVersion = "0.1.0";

/// Bumped whenever the on-disk model layout changes; loaders reject other versions.
inline constexpr int kModelFormatVersion = 1;

} // namespace pgdheat
