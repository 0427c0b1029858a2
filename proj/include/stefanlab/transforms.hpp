// Derived fields of a run: v = alpha_eps(u), the cumulative integral
// w(x,t) = Int_h^t v, the source g, and the discrete residual of
// Lap w - d/dt w = g.
#pragma once

#include "stefanlab/grid.hpp"
#include "stefanlab/nonlinearity.hpp"
#include "stefanlab/solver.hpp"

namespace stefanlab {

struct TransformedRun {
    SpaceTimeField u;
    SpaceTimeField v;
    SpaceTimeField w;  // zero at and below the cut level
    SpaceTimeField g;
    int h_level = 0;
    Epsilon eps{1.0};
    NonlinearitySpec f = NonlinearitySpec::zero();
};

// Pointwise v = alpha_eps(u); satisfies ||u+ - v||_inf <= lambda * eps.
SpaceTimeField compute_v(const SpaceTimeField& u, Epsilon eps);

// Per-node cumulative trapezoid integral of v from the cut level.
SpaceTimeField compute_w(const SpaceTimeField& v, int h_level);

// g(x,t) = -(1-eps) * u^-(x,t) - u(x,h) - Int_h^t f(u(x,s)) ds, trapezoid in
// time (the same rule as compute_w, so constant solutions cancel exactly).
SpaceTimeField compute_g(const SpaceTimeField& u, Epsilon eps, int h_level,
                         const NonlinearitySpec& f);

TransformedRun make_transformed(const SolverRun& run, const ProblemSpec& spec, int h_level);

// Max over interior nodes and levels above the cut of
// |Lap_h w - (w^m - w^{m-1})/dt - g|; the backward time difference matches
// the scheme's.
double w_equation_residual(const TransformedRun& tr);

}  // namespace stefanlab
