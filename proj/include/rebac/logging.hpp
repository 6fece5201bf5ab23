#pragma once

#include <string>

namespace rebac {

enum class LogLevel { Debug = 0, Info = 1, Warn = 2, Error = 3, Silent = 4 };

/// Threshold read once from REBAC_MINER_LOG (debug|info|warn|error|silent);
/// defaults to warn.
LogLevel logThreshold();

void log(LogLevel level, const std::string& message);

inline void logDebug(const std::string& m) { log(LogLevel::Debug, m); }
inline void logInfo(const std::string& m) { log(LogLevel::Info, m); }
inline void logWarn(const std::string& m) { log(LogLevel::Warn, m); }
inline void logError(const std::string& m) { log(LogLevel::Error, m); }

} // namespace rebac
