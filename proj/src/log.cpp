#include "tsrkit/log.hpp"

#include <cstdio>
#include <cstdlib>
#include <cstring>

namespace tsrkit {

LogLevel log_level() {
    static LogLevel level = [] {
        const char* env = std::getenv("TSRKIT_LOG");
        if (env == nullptr) return LogLevel::warn;
        if (std::strcmp(env, "error") == 0) return LogLevel::error;
        if (std::strcmp(env, "warn") == 0) return LogLevel::warn;
        if (std::strcmp(env, "info") == 0) return LogLevel::info;
        if (std::strcmp(env, "debug") == 0) return LogLevel::debug;
        return LogLevel::warn;
    }();
    return level;
}

static const char* level_name(LogLevel level) {
    switch (level) {
        case LogLevel::error: return "error";
        case LogLevel::warn: return "warn";
        case LogLevel::info: return "info";
        case LogLevel::debug: return "debug";
    }
    return "?";
}

void log(LogLevel level, const std::string& message) {
    if (static_cast<int>(level) > static_cast<int>(log_level())) return;
    std::fprintf(stderr, "[%s] %s\n", level_name(level), message.c_str());
}

void log_error(const std::string& message) { log(LogLevel::error, message); }
void log_warn(const std::string& message) { log(LogLevel::warn, message); }
void log_info(const std::string& message) { log(LogLevel::info, message); }
void log_debug(const std::string& message) { log(LogLevel::debug, message); }

} // namespace tsrkit
