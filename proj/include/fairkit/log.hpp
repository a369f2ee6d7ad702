#pragma once

#include <memory>

#include <spdlog/spdlog.h>

namespace fairkit {

/// Shared stderr logger. Level comes from FAIRKIT_LOG (trace, debug, info,
/// warn, error, off); default warn.
std::shared_ptr<spdlog::logger> log();

}  // namespace fairkit
