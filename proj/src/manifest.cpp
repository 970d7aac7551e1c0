#include "jamcast/manifest.hpp"

#include <fstream>

#include <nlohmann/json.hpp>

#include "jamcast/errors.hpp"

namespace jamcast {

void write_manifest(const RunManifest& manifest, const std::string& path) {
    nlohmann::ordered_json doc;
    doc["tool_version"] = kToolVersion;
    doc["command"] = manifest.command;
    doc["inputs"] = manifest.inputs;
    doc["seed"] = manifest.seed;
    doc["resolved_config"] = manifest.resolved_config;
    doc["outputs"] = manifest.outputs;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open manifest for writing: " + path);
    out << doc.dump(2) << '\n';
    if (!out) throw Error("failed writing manifest: " + path);
}

}  // namespace jamcast
