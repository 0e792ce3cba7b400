#pragma once

#include <string_view>

namespace sentinel::log {

enum class Level { quiet = 0, info = 1, debug = 2 };

void set_level(Level level);
Level level();

/// Progress lines go to standard error; standard output is left alone.
void info(std::string_view message);
void debug(std::string_view message);
void warn(std::string_view message);

}  // namespace sentinel::log
