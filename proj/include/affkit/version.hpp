#pragma once

namespace affkit {

inline constexpr const char* kToolName = "affkit";
inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr int kReportSchemaVersion = 1;

}  // namespace affkit
