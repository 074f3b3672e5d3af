#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace commentrisk {

struct ProcessResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

/// Runs argv[0] (looked up on PATH) with the given arguments, no shell involved.
/// stdin is /dev/null; stdout and stderr are captured in full.
ProcessResult run_process(const std::vector<std::string>& argv,
                          const std::filesystem::path& working_dir = {});

}  // namespace commentrisk
