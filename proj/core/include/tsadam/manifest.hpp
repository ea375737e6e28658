#pragma once

#include <map>
#include <string>

namespace tsadam::manifest {

inline constexpr const char* kToolVersion = "0.1.0";

// One record per CLI invocation, emitted as <out_dir>/manifest.json for
// success and failure alike so runs stay auditable.
struct RunManifest {
    std::string command;
    std::map<std::string, std::string> config;  // resolved argument values
    std::string out_dir;
    std::string status = "ok";  // ok | certification_failed | error
    std::string error;          // populated when status == error
    double duration_ms = 0.0;
};

// Returns false (with a stderr warning) instead of throwing: manifest
// emission must never mask the run's own outcome.
bool write_manifest(const RunManifest& m);

}  // namespace tsadam::manifest
