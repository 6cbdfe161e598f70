// runner.hpp — Command execution: runs a configured command and writes
// result.csv / summary.json into the output directory

#pragma once

#include <string>

#include "fvk/config.hpp"

namespace fvk::cli {

struct RunResult {
    int exit_code = 0;        // 0 iff every tolerance verdict passed
    std::string csv_path;
    std::string summary_path;
};

RunResult run(const RunConfig& config);

}  // namespace fvk::cli
