// Flat key = value configuration with section headers.  Every knob of an
// experiment is a first-class key so configs diff cleanly; the run manifest
// uses the same format and can be fed back in to reproduce a run bit-exactly.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "stefanlab/limit_analysis.hpp"
#include "stefanlab/presets.hpp"
#include "stefanlab/solver.hpp"

namespace stefanlab {

enum class Command { solve, sweep, verify, benchmark };
enum class BenchmarkKind { neumann, planar_wave, linear_heat };

// Default acceptance thresholds.  The regression constants were frozen from
// the first oracle runs of the default melting and half-line benchmarks on
// the default grid and are kept fixed.
struct Thresholds {
    double delta_scale = 10.0;
    double delta_floor = 1e-6;
    double cauchy_final = 0.02;
    double pairing_delta = 1e-4;
    double ode_factor = 3.0;
    int ode_buffer_cells = 4;
    double weak_residual_max = 1e-3;
    double weak_decrease_slack = 0.05;
    double identity_c = 0.1;         // identity residual <= identity_c * (dt + h^2)
    double wlimit_max = 0.3;
    double front_tol_abs = 0.05;     // front error <= max(this, 3h + 2 sqrt(eps))
    double front_flux_max = 0.10;    // relative flux mismatch at mid-times
};

struct Config {
    Command command = Command::solve;
    std::string out_dir = "out";
    int parallelism = 0;  // 0 = hardware default
    bool quiet = false;

    Grid1D grid;
    bool grid_explicit = false;  // any [grid] key present in the config

    PresetKind preset = PresetKind::constant;
    PresetOptions preset_opt;
    std::string custom_csv;

    double epsilon = 0.01;
    std::vector<double> epsilon_list;  // resolved; default geometric list

    NonlinearitySpec f = NonlinearitySpec::zero();
    double lambda = 0.0;  // 0 = derive from the preset data

    // boundary overrides; unset = preset default
    std::optional<EndpointBc> bc_left;
    std::optional<EndpointBc> bc_right;

    BenchmarkKind benchmark = BenchmarkKind::neumann;
    bool export_transforms = false;

    Window window;
    Thresholds thresholds;
    NewtonParams newton;

    // assembled problem for the configured preset
    ProblemSpec make_problem(double eps_value) const;
    double delta_for(double eps_value) const;
};

struct ParseResult {
    std::optional<Config> config;
    std::vector<std::string> errors;

    bool ok() const { return errors.empty() && config.has_value(); }
};

// Parses and validates; on failure every detected problem is listed, not just
// the first.  Keys in the [manifest] section are accepted and ignored.
ParseResult parse_config(const std::string& text);

// Renders the fully resolved configuration (plus manifest extras such as
// solver statistics) in the same format parse_config accepts.
std::string render_manifest(const Config& config, double wall_time_s,
                            const std::vector<std::pair<std::string, std::string>>& extras = {});

extern const char* const kArtifactVersion;

}  // namespace stefanlab
