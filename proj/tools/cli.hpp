#pragma once

#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

namespace transient::cli {

inline constexpr const char* tool_name = "transient-kinetics";
inline constexpr const char* tool_version = "1.0.0";

/// Stable process exit codes.
enum ExitCode : int {
    exit_ok = 0,
    exit_input_error = 2,
    exit_insufficient_data = 3,
    exit_io_error = 4,
};

/// Preset directory: $TRANSIENT_KINETICS_PRESETS, else the bundled presets/.
std::filesystem::path preset_dir();

/// Entry point shared by the executable and the tests.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace transient::cli
