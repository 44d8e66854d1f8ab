#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "dispatchopt/domain.hpp"
#include "dispatchopt/ssga.hpp"
#include "dispatchopt/stats.hpp"

namespace dispatchopt {

enum class RunMode { Simulate, Optimize, Study };

struct RunManifest {
    std::vector<int> scenario_ids{1, 2, 3, 4, 5, 6};
    RunMode mode = RunMode::Study;
    std::uint64_t base_seed = 20240101;
    std::filesystem::path output_dir = "results";
    PrecisionPolicy precision;     // simulation replicates per fitness evaluation
    PrecisionPolicy ga_precision;  // whole-GA replicates per scenario
    GaParams ga;
    std::filesystem::path config_path;
};

struct LoadedRun {
    RunManifest manifest;
    NetworkConfig config;
};

class ManifestError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Parses a JSON document (retailers, costs, transport, window, horizon_days,
/// scenario, ga, stats). Omitted blocks keep the numerical-study defaults.
/// Throws ManifestError for syntax and type problems (with line and column),
/// ConfigError for instance invariants, std::invalid_argument for unknown
/// scenario ids.
LoadedRun parse_manifest(const std::string& text);

/// Reads and parses a file; the manifest remembers its path.
LoadedRun load_manifest(const std::filesystem::path& path);

/// The numerical-study instance, GA settings and precision as a JSON document.
std::string study_manifest_json();

/// Applies the reduced CI profile (N = 20, G = 100, max_n = 10).
void apply_fast_profile(RunManifest& manifest);

}  // namespace dispatchopt
