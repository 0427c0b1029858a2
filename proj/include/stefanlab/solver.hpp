// Time stepping for the regularized equation in enthalpy form
//   d/dt beta_eps(v) = Lap v + f(beta_eps(v)),   u = beta_eps(v),
// implicit in the stiff part (semi-smooth Newton on a tridiagonal
// piecewise-linear system), reaction term explicit.  An explicit u-form
// scheme is kept as an independent cross-check oracle.
#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "stefanlab/grid.hpp"
#include "stefanlab/nonlinearity.hpp"
#include "stefanlab/test_function.hpp"

namespace stefanlab {

enum class SolverErrorCode {
    newton_diverged,
    cfl_violation,
    non_finite_state,
    bound_exceeded,
};

struct SolverError : std::runtime_error {
    SolverError(SolverErrorCode code_, std::string msg, int level_ = -1, double residual_ = 0.0)
        : std::runtime_error(std::move(msg)), code(code_), level(level_), residual(residual_) {}

    SolverErrorCode code;
    int level;        // failing time level, -1 if not applicable
    double residual;  // final Newton residual for newton_diverged
};

// Piecewise-linear trace in t, constant beyond the end knots.
struct BoundaryTrace {
    std::vector<std::pair<double, double>> knots;  // (t, value), increasing t

    static BoundaryTrace constant(double value) { return {{{0.0, value}}}; }
    double eval(double t) const;
};

struct EndpointBc {
    enum class Kind { dirichlet, neumann_zero };

    Kind kind = Kind::neumann_zero;
    BoundaryTrace trace;  // dirichlet only

    static EndpointBc neumann_zero() { return {}; }
    static EndpointBc dirichlet(BoundaryTrace trace);
    static EndpointBc dirichlet_constant(double value);
};

struct BoundarySpec {
    EndpointBc left;
    EndpointBc right;

    static BoundarySpec neumann_zero() { return {}; }
};

// Everything that determines one PDE run.
struct ProblemSpec {
    Grid1D grid;
    Epsilon eps{1.0};
    NonlinearitySpec f = NonlinearitySpec::zero();
    ScalarField u0;
    BoundarySpec bc;
    double lambda_bound = 1.0;   // a-priori sup bound on |u|
    bool monitor_bounds = true;  // runtime check of the a-priori bound

    static ProblemSpec make(Grid1D grid, Epsilon eps, NonlinearitySpec f, ScalarField u0,
                            BoundarySpec bc, double lambda_bound, bool monitor_bounds = true);
    ProblemSpec with_epsilon(Epsilon new_eps) const;
};

struct NewtonParams {
    double tol = 1e-11;  // max-norm residual
    int max_iter = 50;
};

struct NewtonStats {
    int max_iterations_per_step = 0;
    long total_iterations = 0;
    double worst_residual = 0.0;  // max over steps of the accepted residual
};

struct SolverRun {
    SpaceTimeField u;
    SpaceTimeField v;
    NewtonStats stats;

    SolverRun(const Grid1D& g) : u(g), v(g) {}
};

// One implicit step of the v-equation to time t_next: solves, node-wise,
//   beta_eps(v_next) - dt * Lap_h v_next = beta_eps(v_now) + dt * f(beta_eps(v_now))
// with boundary rows replaced per bc.  Warm-started from v_now; on return the
// max-norm residual is <= params.tol.
ScalarField step_implicit(const ScalarField& v_now, const ProblemSpec& spec,
                          const NewtonParams& params, double t_next, NewtonStats* stats = nullptr);

// Full run; row 0 of u equals spec.u0 verbatim.
SolverRun solve(const ProblemSpec& spec, const NewtonParams& params = {});

// Explicit u-form oracle u^{n+1} = u^n + dt*(Lap_h alpha_eps(u^n) + f(u^n)).
// Requires dt <= h^2 / (2*max(1, eps)).
SpaceTimeField solve_explicit_oracle(const ProblemSpec& spec);

// Discrete two-sided check of the L^2 energy evolution identity
//   d/dt (1/2) Int u^2 eta^2 = -Int |D(u+ eta)|^2 + Int (u+)^2 |D eta|^2
//                              - eps Int |D(u- eta)|^2 + eps Int (u-)^2 |D eta|^2
//                              + Int f(u) u eta^2
// per step; returns the max mismatch over steps.  Gradients are discrete
// cell differences so that constants cancel exactly.
double energy_identity_residual(const SpaceTimeField& u, const SpaceBump& eta,
                                const ProblemSpec& spec);

struct ComparisonReport {
    long violations = 0;
    double worst_violation = 0.0;  // max over nodes of (u_lo - u_hi - tol), 0 if none
    double min_gap = 0.0;          // min over nodes of (u_hi - u_lo)
};

// Counts space-time nodes where u_lo exceeds u_hi by more than tol.
ComparisonReport comparison_check(const SpaceTimeField& run_lo, const SpaceTimeField& run_hi,
                                  double tol = 1e-9);

}  // namespace stefanlab
