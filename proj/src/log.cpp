#include "qstar/log.hpp"

#include <cstdlib>
#include <memory>

#include <spdlog/sinks/stdout_sinks.h>

namespace qstar {

spdlog::logger& log() {
  static const std::shared_ptr<spdlog::logger> logger = [] {
    auto l = std::make_shared<spdlog::logger>("qstar", std::make_shared<spdlog::sinks::stderr_sink_mt>());
    l->set_pattern("[qstar %l] %v");
    const char* env = std::getenv("QSTAR_LOG");
    l->set_level(env ? spdlog::level::from_str(env) : spdlog::level::warn);
    return l;
  }();
  return *logger;
}

}  // namespace qstar
