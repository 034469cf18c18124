#pragma once

namespace evident::logging {

enum class Level { kError = 0, kInfo = 1, kDebug = 2 };

// Verbosity is read once from EVIDENT_FUSE_LOG (error|info|debug),
// default info. Messages go to stderr so stdout stays machine-readable.
Level level();
void set_level(Level lv);

void message(Level lv, const char* fmt, ...)
#if defined(__GNUC__)
    __attribute__((format(printf, 2, 3)))
#endif
    ;

}  // namespace evident::logging

#define EVIDENT_LOG_ERROR(...) \
  ::evident::logging::message(::evident::logging::Level::kError, __VA_ARGS__)
#define EVIDENT_LOG_INFO(...) \
  ::evident::logging::message(::evident::logging::Level::kInfo, __VA_ARGS__)
#define EVIDENT_LOG_DEBUG(...) \
  ::evident::logging::message(::evident::logging::Level::kDebug, __VA_ARGS__)
