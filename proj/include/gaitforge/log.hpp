#pragma once

#include <string>

namespace gaitforge {

enum class LogLevel : int { Debug = 0, Info = 1, Warn = 2, Error = 3 };

// Level comes from GAITFORGE_LOG (debug|info|warn|error), default warn.
LogLevel log_level();
void set_log_level(LogLevel level);
void log_message(LogLevel level, const std::string& msg);

inline void log_debug(const std::string& m) { log_message(LogLevel::Debug, m); }
inline void log_info(const std::string& m) { log_message(LogLevel::Info, m); }
inline void log_warn(const std::string& m) { log_message(LogLevel::Warn, m); }
inline void log_error(const std::string& m) { log_message(LogLevel::Error, m); }

}  // namespace gaitforge
