#pragma once

#include <filesystem>
#include <map>
#include <string>

#include "nslab/dynamics.hpp"

namespace nslab {

/// Flat key=value run configuration (no nesting; trivially diffable).
/// Keys: n, length, nu, dt, t-final, scheme, dealias, init, output-every,
/// seed, out-dir. '#' starts a comment.
struct RunConfigFile {
    SimulationConfig config;
    std::string out_dir = "run-out";
    std::map<std::string, std::string> echo;  // normalized key=value pairs
};

RunConfigFile parse_run_config(const std::filesystem::path& path);
RunConfigFile parse_run_config_text(const std::string& text);

/// 17-significant-digit round-trip representation.
std::string format_full(double value);

}  // namespace nslab
