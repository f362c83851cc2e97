#pragma once

#include "config.hpp"
#include "report.hpp"

namespace toa::cli {

// Executes the configured scenario and assembles the report (everything but
// the output files). Deterministic for a fixed config, seed included.
RunReport run(const RunConfig& config);

}  // namespace toa::cli
