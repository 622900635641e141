#pragma once

#include <string>
#include <vector>

namespace sketchridge::cli {

/// Entry point shared by the executable and the tests. `args` excludes the
/// program name. Returns the process exit code.
int run_cli(const std::vector<std::string>& args);

}  // namespace sketchridge::cli
