#include "stokes/log.hpp"

#include <cstdio>
#include <cstdlib>
#include <cstring>

namespace stokes::logging {

Level level() {
  static const Level lvl = [] {
    const char* env = std::getenv("STOKES_LOG");
    if (env == nullptr) return Level::off;
    if (std::strcmp(env, "debug") == 0) return Level::debug;
    if (std::strcmp(env, "info") == 0) return Level::info;
    return Level::off;
  }();
  return lvl;
}

bool enabled(Level lvl) { return static_cast<int>(lvl) <= static_cast<int>(level()); }

void event(Level lvl, const std::string& name,
           const std::vector<std::pair<std::string, std::string>>& kvs) {
  if (!enabled(lvl)) return;
  std::string line = "event=" + name;
  for (const auto& [k, v] : kvs) {
    line += ' ';
    line += k;
    line += '=';
    line += v;
  }
  std::fprintf(stderr, "%s\n", line.c_str());
}

std::string str(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string str(int v) { return std::to_string(v); }
std::string str(std::size_t v) { return std::to_string(v); }

}  // namespace stokes::logging
