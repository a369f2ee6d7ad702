#include "fairkit/log.hpp"

#include <cstdlib>
#include <mutex>

#include <spdlog/sinks/stdout_color_sinks.h>

namespace fairkit {

std::shared_ptr<spdlog::logger> log() {
    static std::once_flag once;
    static std::shared_ptr<spdlog::logger> logger;
    std::call_once(once, [] {
        logger = spdlog::stderr_color_mt("fairkit");
        logger->set_pattern("[%l] %v");
        auto level = spdlog::level::warn;
        if (const char* env = std::getenv("FAIRKIT_LOG")) level = spdlog::level::from_str(env);
        logger->set_level(level);
    });
    return logger;
}

}  // namespace fairkit
