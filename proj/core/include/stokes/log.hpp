#pragma once

#include <string>
#include <utility>
#include <vector>

namespace stokes::logging {

enum class Level { off = 0, info = 1, debug = 2 };

/// Level parsed once from the STOKES_LOG environment variable ("info"/"debug").
Level level();

bool enabled(Level lvl);

/// Emits one "key=value key=value ..." line to stderr, prefixed with the
/// event name. No-op when the level is not enabled.
void event(Level lvl, const std::string& name,
           const std::vector<std::pair<std::string, std::string>>& kvs);

std::string str(double v);
std::string str(int v);
std::string str(std::size_t v);

}  // namespace stokes::logging
