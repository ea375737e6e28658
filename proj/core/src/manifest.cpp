#include "tsadam/manifest.hpp"

#include <fstream>
#include <iostream>

#include <json.hpp>

namespace tsadam::manifest {

bool write_manifest(const RunManifest& m) {
    nlohmann::json doc;
    doc["command"] = m.command;
    doc["config"] = m.config;
    doc["out_dir"] = m.out_dir;
    doc["tool_version"] = kToolVersion;
    doc["status"] = m.status;
    if (!m.error.empty()) doc["error"] = m.error;
    doc["duration_ms"] = m.duration_ms;

    const std::string path = m.out_dir.empty() ? "manifest.json"
                                               : m.out_dir + "/manifest.json";
    std::ofstream out(path);
    if (out) out << doc.dump(2) << '\n';
    if (!out) {
        std::cerr << "warning: could not write " << path << '\n';
        return false;
    }
    return true;
}

}  // namespace tsadam::manifest
