#pragma once

#include "sphtraffic/engine.hpp"
#include "sphtraffic/scenario.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace sphtraffic {

inline constexpr const char* kToolVersion = "0.1.0";

struct RunArtifacts {
    std::string out_dir;
    std::string metrics_path;
    std::string congestion_path;
    std::string manifest_path;
    std::vector<std::string> density_grid_paths;
    RunResult result;
};

// Execute one run and write metrics.csv, congestion.csv, manifest.json and
// (when run.density_grid_n >= 4) one density grid file per sample period.
// All numeric output is printed with 9 significant digits, '.' decimal
// separator, and '\n' line endings, so identical inputs give identical bytes.
RunArtifacts run_command(const ScenarioConfig& cfg, const std::string& out_dir);

struct SweepRow {
    std::uint64_t seed = 0;
    std::string policy;
    bool failed = false;
    std::string error;
    // Onset of the first monitored segment; empty = never congested.
    std::optional<double> onset;
};

struct SweepArtifacts {
    std::string summary_path;
    std::vector<SweepRow> rows;
};

// Cross product of seeds x policies, each run in its own subdirectory, up to
// `jobs` in parallel. Row failures are recorded and the sweep continues.
SweepArtifacts sweep_command(const ScenarioConfig& base,
                             const std::vector<std::uint64_t>& seeds,
                             const std::vector<std::string>& policies, int jobs,
                             const std::string& out_dir);

}  // namespace sphtraffic
