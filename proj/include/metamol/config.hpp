// config.hpp — run configuration: strict key=value document, defaults are the
// weak-drive reference parameter set

#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "metamol/grid.hpp"
#include "metamol/model.hpp"
#include "metamol/trajectory.hpp"

namespace metamol {

enum class Engine { Pwd, Grid, Both };

struct RunConfig {
    ModelParams params;
    Engine engine = Engine::Pwd;

    double t_max = 100.0;
    double output_dt = 0.1;
    std::uint64_t seed = 20124;
    int workers = 0;  // 0 = auto; METAMOL_WORKERS overrides
    std::string out_prefix = "series";
    InitialSlot initial_state = InitialSlot::Ground;

    double pwd_tau = 0.1;
    long pwd_trajectories = 100000;
    int pwd_blocks = 20;
    double pwd_weight_bound = 1e6;

    double grid_tau = 0.001;
    GridGeometry grid_geometry;
    double grid_boundary_tol = 1e-5;

    RunSchedule pwd_schedule() const;
    GridRunOptions grid_options() const;
};

// Strict parser: unknown keys are rejected, errors carry the line number, the
// resulting config is fully validated. Empty text yields the defaults.
RunConfig parse_config(const std::string& text);

RunConfig load_config(const std::string& path);

// Applies one "key = value" assignment on top of an existing config.
void apply_override(RunConfig& cfg, const std::string& assignment);

// Canonical serialization; parse_config(serialize_config(c)) == c.
std::string serialize_config(const RunConfig& cfg);

std::map<std::string, std::string> config_entries(const RunConfig& cfg);

// FNV-1a hash of the canonical serialization.
std::uint64_t config_hash(const RunConfig& cfg);

// Rebuilds a config from series metadata ("config.<key>" entries).
RunConfig config_from_meta(const std::map<std::string, std::string>& meta);

std::string engine_name(Engine e);

}  // namespace metamol
