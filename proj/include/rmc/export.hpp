#pragma once

// CSV and JSON artifact writers. Every artifact carries the scenario name,
// scenario hash, seed, N and tool version: CSV files as a leading '#' line,
// JSON files as a top-level "metadata" object.

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "rmc/attractor.hpp"
#include "rmc/integrator.hpp"
#include "rmc/scenario.hpp"
#include "rmc/verification.hpp"

namespace rmc {

struct ArtifactMeta {
    std::string scenario;
    std::string hash;
    std::uint64_t seed = 0;
    std::size_t n = 0;
    std::string version;
};

std::string tool_version();
ArtifactMeta artifact_meta(const Scenario& s, std::uint64_t seed);

/// 17 significant digits; "inf"/"nan" for non-finite values.
std::string format_double(double x);

struct Artifact {
    std::string csv;
    std::string json;
};

Artifact trajectory_artifact(const Trajectory& traj, const ArtifactMeta& meta);
Artifact attractor_artifact(const AttractorPath& path, const ArtifactMeta& meta);
Artifact contraction_artifact(const std::vector<ContractionReport>& reports, const ArtifactMeta& meta);
Artifact euler_artifact(const std::vector<EulerComparison>& rows, const ArtifactMeta& meta);
Artifact verify_artifact(const std::vector<CheckResult>& checks, const ArtifactMeta& meta);

/// Writes <dir>/<stem>.csv and/or <dir>/<stem>.json per `formats`; returns the paths written.
std::vector<std::filesystem::path> write_artifact(const std::filesystem::path& dir, const std::string& stem,
                                                  const std::vector<std::string>& formats, const Artifact& a);

}  // namespace rmc
