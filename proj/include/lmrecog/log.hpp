#pragma once

// Diagnostics on stderr. LMRECOG_LOG selects error (default), info or debug.

#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <cstdlib>
#include <memory>
#include <string>
#include <string_view>

namespace lmrecog::log {

inline spdlog::level::level_enum level_from_env() {
  const char* v = std::getenv("LMRECOG_LOG");
  std::string_view s = v ? v : "";
  if (s == "debug") return spdlog::level::debug;
  if (s == "info") return spdlog::level::info;
  return spdlog::level::err;
}

inline spdlog::logger& logger() {
  static const std::shared_ptr<spdlog::logger> instance = [] {
    auto l = std::make_shared<spdlog::logger>("lmrecog", std::make_shared<spdlog::sinks::stderr_color_sink_mt>());
    l->set_pattern("[%l] %v");
    l->set_level(level_from_env());
    return l;
  }();
  return *instance;
}

inline void error(const std::string& msg) { logger().error(msg); }
inline void info(const std::string& msg) { logger().info(msg); }
inline void debug(const std::string& msg) { logger().debug(msg); }

}  // namespace lmrecog::log
