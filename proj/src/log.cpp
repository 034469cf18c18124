#include "evident/log.hpp"

#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <cstring>

namespace evident::logging {

namespace {

Level parse_env() {
  const char* env = std::getenv("EVIDENT_FUSE_LOG");
  if (env == nullptr) return Level::kInfo;
  if (std::strcmp(env, "error") == 0) return Level::kError;
  if (std::strcmp(env, "info") == 0) return Level::kInfo;
  if (std::strcmp(env, "debug") == 0) return Level::kDebug;
  std::fprintf(stderr, "[error] unknown EVIDENT_FUSE_LOG value '%s', using info\n", env);
  return Level::kInfo;
}

Level& current() {
  static Level lv = parse_env();
  return lv;
}

const char* tag(Level lv) {
  switch (lv) {
    case Level::kError: return "error";
    case Level::kInfo: return "info";
    case Level::kDebug: return "debug";
  }
  return "?";
}

}  // namespace

Level level() { return current(); }

void set_level(Level lv) { current() = lv; }

void message(Level lv, const char* fmt, ...) {
  if (static_cast<int>(lv) > static_cast<int>(current())) return;
  std::fprintf(stderr, "[%s] ", tag(lv));
  va_list args;
  va_start(args, fmt);
  std::vfprintf(stderr, fmt, args);
  va_end(args);
  std::fputc('\n', stderr);
}

}  // namespace evident::logging
