#pragma once

#include <string>
#include <vector>

#include "tailrisk/scaling_fit.hpp"
#include "tailrisk/simulation.hpp"

namespace tailrisk {

// Everything needed to reproduce and audit one CLI invocation. Timestamps
// appear here and only here; the data outputs stay byte-stable.
struct RunManifest {
    std::string command;
    std::string config_digest;  // fnv1a-64 hex of the canonical config JSON
    std::uint64_t seed = 0;
    std::string tool_version;
    std::string created_utc;
    std::vector<std::string> outputs;  // file names written next to the manifest
};

std::string fit_to_json(const ScalingFit& fit);
std::string summary_to_json(const SimSummary& summary);
std::string manifest_to_json(const RunManifest& manifest);

// Canonical JSON text of a study configuration (sorted keys), used both for
// the manifest digest and for echoing the effective config to disk.
std::string sim_config_to_json(const SimConfig& config);

// Parses a study configuration; unknown keys are rejected so typos cannot
// silently fall back to defaults. Throws DataError with the key name.
SimConfig sim_config_from_json(const std::string& text);

// FNV-1a 64-bit digest, hex-encoded.
std::string fnv1a_hex(const std::string& bytes);

// UTC wall-clock in ISO-8601, for manifests only.
std::string utc_now_iso8601();

}  // namespace tailrisk
