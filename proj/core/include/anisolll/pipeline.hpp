// pipeline.hpp — batch front-end plumbing: scenario configs (flat key-value
// text with [trap]/[solver]/[outputs] sections), the derive -> classify ->
// bound -> minimize -> vortex pipeline, and artifact emission with
// checksummed manifests.

#pragma once

#include "anisolll/energy.hpp"
#include "anisolll/minimize.hpp"
#include "anisolll/trap.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace lll {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SolverConfig {
    int n = 120;
    int grid_n1 = 256, grid_n2 = 256;
    double grid_l1 = 10.0, grid_l2 = 10.0;
    double tol = 1e-6;
    int max_iter = 4000;
    std::uint64_t seed = 1;
    int restarts = 3;
    int degree_cap = kDefaultDegreeCap;
    std::string warm_start = "auto";
};

struct ScenarioConfig {
    std::string name = "scenario";
    std::optional<double> omega, nu, eps;
    double g = 1.0;
    double omega_floor = 1e-3;
    SolverConfig solver;
    std::string out_dir = "out";
    std::vector<std::string> formats = {"csv", "gpmat", "json"};

    std::string echo; // the raw config text, for the manifest
};

ScenarioConfig parse_config_text(const std::string& text);
ScenarioConfig parse_config_file(const std::string& path);

// Two of (omega, nu, eps) given -> third solved; all three must satisfy the
// constraint to 1e-9.  Throws ConfigError with a diagnostic otherwise.
TrapParams resolve_trap(const ScenarioConfig& cfg);

struct ArtifactRecord {
    std::string file;
    std::string fnv1a64; // hex checksum of the file bytes
};

struct RunManifest {
    std::string name;
    std::string version;
    std::string regime;
    double ratio = 0.0;
    bool converged = false;
    double energy_total = 0.0;
    double wall_ms = 0.0;
    std::vector<ArtifactRecord> artifacts;
    std::string config_echo;
};

struct RunOutcome {
    RunManifest manifest;
    MinimizerResult minimizer;
    VortexSet vortices;
    bool has_stats = false;
    LatticeStats stats;
};

// Full pipeline; writes artifacts under cfg.out_dir and the manifest as
// manifest.json.  Throws ConfigError (invalid inputs) or IoError (filesystem).
// A non-converged solve still emits artifacts; check outcome.manifest.converged.
RunOutcome run_scenario(const ScenarioConfig& cfg);

std::uint64_t fnv1a64(const std::string& bytes);
std::string fnv1a64_hex(const std::string& bytes);

// Validate that every artifact listed in a manifest file exists and matches
// its recorded checksum.
bool verify_manifest(const std::string& manifest_path);

const char* library_version();

} // namespace lll
