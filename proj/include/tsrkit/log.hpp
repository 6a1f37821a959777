#pragma once

#include <string>

namespace tsrkit {

enum class LogLevel { error = 0, warn = 1, info = 2, debug = 3 };

// Active level comes from the TSRKIT_LOG environment variable
// (error|warn|info|debug); unset or unrecognized values mean warn.
LogLevel log_level();

// Writes "[level] message" to stderr when level is at or below the active
// level. stdout is reserved for data output.
void log(LogLevel level, const std::string& message);

void log_error(const std::string& message);
void log_warn(const std::string& message);
void log_info(const std::string& message);
void log_debug(const std::string& message);

} // namespace tsrkit
