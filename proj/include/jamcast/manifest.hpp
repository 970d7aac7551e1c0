#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace jamcast {

inline constexpr const char* kToolVersion = "0.1.0";

// Reproducibility record written alongside every command's outputs. Holds no
// wall-clock state, so re-running the same command bytes out identically.
struct RunManifest {
    std::string command;
    std::vector<std::string> inputs;
    std::uint64_t seed = 0;
    std::map<std::string, std::string> resolved_config;  // flat key -> value
    std::vector<std::string> outputs;  // relative to the manifest location
};

void write_manifest(const RunManifest& manifest, const std::string& path);

}  // namespace jamcast
