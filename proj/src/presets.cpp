#include "stefanlab/presets.hpp"

#include <cmath>
#include <stdexcept>

namespace stefanlab {

PresetKind preset_from_name(const std::string& name) {
    if (name == "constant") return PresetKind::constant;
    if (name == "step") return PresetKind::step;
    if (name == "tent") return PresetKind::tent;
    if (name == "melting") return PresetKind::melting;
    if (name == "neumann") return PresetKind::neumann;
    if (name == "custom") return PresetKind::custom;
    throw std::invalid_argument("unknown preset '" + name + "'");
}

std::string preset_name(PresetKind kind) {
    switch (kind) {
        case PresetKind::constant: return "constant";
        case PresetKind::step: return "step";
        case PresetKind::tent: return "tent";
        case PresetKind::melting: return "melting";
        case PresetKind::neumann: return "neumann";
        case PresetKind::custom: return "custom";
    }
    return "?";
}

namespace {
double smoothstep(double r) {
    if (r <= 0.0) return 0.0;
    if (r >= 1.0) return 1.0;
    return r * r * (3.0 - 2.0 * r);
}
}  // namespace

ScalarField preset_initial_data(PresetKind kind, const Grid1D& grid, const PresetOptions& opt) {
    switch (kind) {
        case PresetKind::constant:
            return ScalarField::sample(grid, [&](double) { return opt.constant_value; });
        case PresetKind::step:
            return ScalarField::sample(grid, [&](double x) {
                const double w = opt.step_half_width;
                if (x <= -w) return 1.0;
                if (x >= w) return -1.0;
                return -x / w;
            });
        case PresetKind::tent:
            return ScalarField::sample(grid, [&](double x) {
                return std::max(0.0, 1.0 - std::abs(x) / opt.tent_half_width);
            });
        case PresetKind::melting:
            return ScalarField::sample(grid, [&](double x) {
                const double r = (x - opt.melt_ramp_start) / opt.melt_ramp_width;
                return 1.0 - 2.0 * smoothstep(r);
            });
        case PresetKind::neumann: {
            const NeumannSolution sol = NeumannSolution::make(opt.u_b, opt.w0);
            const double s0 = sol.front(opt.t0);
            return ScalarField::sample(grid, [&](double x) {
                return x < s0 ? sol.eval(x, opt.t0) : -opt.w0;
            });
        }
        case PresetKind::custom:
            throw std::invalid_argument("custom preset data must be loaded from its CSV");
    }
    throw std::invalid_argument("bad preset kind");
}

BoundarySpec preset_boundary(PresetKind kind, const PresetOptions& opt) {
    BoundarySpec bc;
    switch (kind) {
        case PresetKind::melting:
            bc.left = EndpointBc::dirichlet_constant(1.0);
            bc.right = EndpointBc::neumann_zero();
            break;
        case PresetKind::neumann:
            bc.left = EndpointBc::dirichlet_constant(opt.u_b);
            bc.right = EndpointBc::dirichlet_constant(-opt.w0);
            break;
        default:
            break;  // Neumann-zero both sides
    }
    return bc;
}

double preset_lambda(PresetKind kind, const ScalarField& u0) {
    (void)kind;
    return std::max(1.0, u0.sup_norm());
}

Grid1D preset_default_grid(PresetKind kind) {
    if (kind == PresetKind::neumann) return Grid1D::make(0.0, 2.0, 400, 0.9, 3600);
    return Grid1D::make(-1.0, 1.0, 400, 1.0, 4000);
}

ProblemSpec make_preset_problem(PresetKind kind, const Grid1D& grid, Epsilon eps,
                                NonlinearitySpec f, const PresetOptions& opt) {
    ScalarField u0 = preset_initial_data(kind, grid, opt);
    BoundarySpec bc = preset_boundary(kind, opt);
    const double lambda = preset_lambda(kind, u0);
    return ProblemSpec::make(grid, eps, std::move(f), std::move(u0), bc, lambda);
}

}  // namespace stefanlab
