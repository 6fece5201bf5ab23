#include "rebac/logging.hpp"

#include <cstdlib>
#include <iostream>
#include <mutex>

namespace rebac {

LogLevel logThreshold() {
    static const LogLevel level = [] {
        const char* env = std::getenv("REBAC_MINER_LOG");
        if (!env) return LogLevel::Warn;
        const std::string s(env);
        if (s == "debug") return LogLevel::Debug;
        if (s == "info") return LogLevel::Info;
        if (s == "warn") return LogLevel::Warn;
        if (s == "error") return LogLevel::Error;
        if (s == "silent" || s == "off") return LogLevel::Silent;
        return LogLevel::Warn;
    }();
    return level;
}

void log(LogLevel level, const std::string& message) {
    if (level < logThreshold()) return;
    static std::mutex mutex;
    static const char* names[] = {"debug", "info", "warn", "error"};
    std::lock_guard<std::mutex> lock(mutex);
    std::cerr << "[" << names[static_cast<int>(level)] << "] " << message << "\n";
}

} // namespace rebac
