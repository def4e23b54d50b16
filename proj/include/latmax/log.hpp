#pragma once

#include <cstdio>
#include <cstdlib>
#include <cstring>

namespace latmax {

enum class LogLevel { Error = 0, Warn = 1, Info = 2, Debug = 3 };

// Level comes from LATMAX_LOG (error|warn|info|debug), read once.
inline LogLevel log_level() {
  static const LogLevel level = [] {
    const char* env = std::getenv("LATMAX_LOG");
    if (env == nullptr) return LogLevel::Warn;
    if (std::strcmp(env, "error") == 0) return LogLevel::Error;
    if (std::strcmp(env, "info") == 0) return LogLevel::Info;
    if (std::strcmp(env, "debug") == 0) return LogLevel::Debug;
    return LogLevel::Warn;
  }();
  return level;
}

template <typename... Args>
void log_at(LogLevel level, const char* tag, const char* fmt, Args... args) {
  if (static_cast<int>(level) > static_cast<int>(log_level())) return;
  std::fprintf(stderr, "[latmax %s] ", tag);
  std::fprintf(stderr, fmt, args...);
  std::fputc('\n', stderr);
}

#define LATMAX_LOG_ERROR(...) ::latmax::log_at(::latmax::LogLevel::Error, "error", __VA_ARGS__)
#define LATMAX_LOG_WARN(...) ::latmax::log_at(::latmax::LogLevel::Warn, "warn", __VA_ARGS__)
#define LATMAX_LOG_INFO(...) ::latmax::log_at(::latmax::LogLevel::Info, "info", __VA_ARGS__)
#define LATMAX_LOG_DEBUG(...) ::latmax::log_at(::latmax::LogLevel::Debug, "debug", __VA_ARGS__)

}  // namespace latmax
