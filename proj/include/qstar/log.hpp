#pragma once

#include <spdlog/spdlog.h>

namespace qstar {

/// Library logger on stderr. QSTAR_LOG sets the level (trace, debug, info,
/// warn, error, off); the default is warn.
spdlog::logger& log();

}  // namespace qstar
