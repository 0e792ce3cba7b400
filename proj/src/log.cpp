#include "sentinel/log.hpp"

#include <atomic>
#include <iostream>
#include <mutex>

namespace sentinel::log {
namespace {

std::atomic<Level> current{Level::info};
std::mutex sink;

void emit(std::string_view tag, std::string_view message) {
    std::lock_guard lock(sink);
    std::cerr << "[" << tag << "] " << message << '\n';
}

}  // namespace

void set_level(Level l) { current = l; }
Level level() { return current; }

void info(std::string_view m) {
    if (current >= Level::info) emit("info", m);
}
void debug(std::string_view m) {
    if (current >= Level::debug) emit("debug", m);
}
void warn(std::string_view m) { emit("warn", m); }

}  // namespace sentinel::log
