#pragma once

namespace qekr {

inline constexpr const char* kVersion = "0.1.0";
/// Bumped whenever a CSV column set changes.
inline constexpr int kCsvSchema = 1;

}  // namespace qekr
