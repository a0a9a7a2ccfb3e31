#include "nucfw/log.hpp"

#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <cstring>

namespace nucfw::log {

static Level parse_level() {
  const char* env = std::getenv("NUCFW_LOG");
  if (env == nullptr) return Level::Warn;
  if (std::strcmp(env, "debug") == 0) return Level::Debug;
  if (std::strcmp(env, "info") == 0) return Level::Info;
  if (std::strcmp(env, "warn") == 0) return Level::Warn;
  if (std::strcmp(env, "error") == 0) return Level::Error;
  if (std::strcmp(env, "off") == 0) return Level::Off;
  return Level::Warn;
}

Level level() {
  static const Level lvl = parse_level();
  return lvl;
}

static void emit(Level lvl, const char* tag, const char* fmt, va_list args) {
  if (lvl < level()) return;
  std::fprintf(stderr, "[nucfw %s] ", tag);
  std::vfprintf(stderr, fmt, args);
  std::fputc('\n', stderr);
}

#define NUCFW_LOG_IMPL(name, lvl, tag)      \
  void name(const char* fmt, ...) {         \
    va_list args;                           \
    va_start(args, fmt);                    \
    emit(lvl, tag, fmt, args);              \
    va_end(args);                           \
  }

NUCFW_LOG_IMPL(debug, Level::Debug, "debug")
NUCFW_LOG_IMPL(info, Level::Info, "info")
NUCFW_LOG_IMPL(warn, Level::Warn, "warn")
NUCFW_LOG_IMPL(error, Level::Error, "error")

#undef NUCFW_LOG_IMPL

}  // namespace nucfw::log
