#pragma once

namespace nucfw::log {

enum class Level { Debug = 0, Info = 1, Warn = 2, Error = 3, Off = 4 };

// Level is read once from the NUCFW_LOG environment variable
// (debug|info|warn|error|off); default is warn.
Level level();

void debug(const char* fmt, ...);
void info(const char* fmt, ...);
void warn(const char* fmt, ...);
void error(const char* fmt, ...);

}  // namespace nucfw::log
