// Named initial-data presets.  The melting preset is the workhorse for the
// sweep diagnostics: a hot wall drives a front through ice that fills the
// right part of the interval, leaving an untouched frozen zone inside the
// observation window.
#pragma once

#include <string>

#include "stefanlab/benchmarks.hpp"
#include "stefanlab/solver.hpp"

namespace stefanlab {

enum class PresetKind { constant, step, tent, melting, neumann, custom };

PresetKind preset_from_name(const std::string& name);
std::string preset_name(PresetKind kind);

struct PresetOptions {
    double constant_value = 0.5;
    // melting: plateau at 1 until ramp_start, smoothstep down to -1 over
    // ramp_width, -1 beyond
    double melt_ramp_start = -0.5;
    double melt_ramp_width = 0.4;
    // step: linear ramp from 1 to -1 over [-half_width, half_width]
    double step_half_width = 0.1;
    // tent: peak 1 at the origin, zero beyond |x| >= half_width
    double tent_half_width = 0.5;
    // neumann benchmark: boundary temperature, latent heat, start time
    double u_b = 1.0;
    double w0 = 1.0;
    double t0 = 0.1;
};

ScalarField preset_initial_data(PresetKind kind, const Grid1D& grid, const PresetOptions& opt);

BoundarySpec preset_boundary(PresetKind kind, const PresetOptions& opt);

double preset_lambda(PresetKind kind, const ScalarField& u0);

// Grid the preset was designed around; configs may override.
Grid1D preset_default_grid(PresetKind kind);

ProblemSpec make_preset_problem(PresetKind kind, const Grid1D& grid, Epsilon eps,
                                NonlinearitySpec f, const PresetOptions& opt = {});

}  // namespace stefanlab
