// Closed-form references: the Neumann similarity solution of the classical
// one-phase melting problem, a planar caloric wave with a straight free line,
// and the small-diffusivity linear heat solve.
#pragma once

#include <span>
#include <vector>

#include "stefanlab/grid.hpp"

namespace stefanlab {

// Error function via power series (|x| < 3) and a continued fraction for the
// complement (|x| >= 3).  Kept independent of the C library implementation so
// tests can cross-check the two.
double erf(double x);
double erfc(double x);

// Root of sqrt(pi) * lambda * exp(lambda^2) * erf(lambda) = u_b / w0 by
// bisection on [1e-8, 5]; throws if the ratio is outside the bracket.
double neumann_lambda(double u_b, double w0);

struct NeumannSolution {
    double u_b = 1.0;    // boundary temperature, > 0
    double w0 = 1.0;     // constant latent heat, > 0
    double lambda = 0.0; // similarity root

    static NeumannSolution make(double u_b, double w0);

    // Temperature u_b * (1 - erf(x/(2 sqrt(t))) / erf(lambda)) ahead of the
    // front, 0 beyond it.
    double eval(double x, double t) const;
    double front(double t) const;        // s(t) = 2 lambda sqrt(t)
    double front_speed(double t) const;  // s'(t) = lambda / sqrt(t)
    // One-sided temperature gradient at the front, liquid side.
    double front_gradient(double t) const;
};

struct NeumannEval {
    double u;
    double front;
};
NeumannEval neumann_eval(const NeumannSolution& sol, double x, double t);

// u(x,t) = A * (1 - exp((t + xi x)/xi^2)) where t < -xi x, 0 elsewhere.
// Solves the heat equation in its support and vanishes on the free line
// t = -xi x; the gradient and time derivative there satisfy the melting
// front condition with latent heat A.
struct PlanarWave {
    double amplitude = 1.0;  // A > 0
    double slope = 1.0;      // xi != 0

    double eval(double x, double t) const;
    double dt_(double x, double t) const;
    double dx(double x, double t) const;
    double dxx(double x, double t) const;
};

SpaceTimeField sample_planar_wave(const PlanarWave& pw, const Grid1D& grid);

// Solves d/dt u = eps * Lap u with initial and Dirichlet boundary data equal
// to the negative part of phi (backward Euler); returns, per eps, the sup
// over the window's x-range and all time levels of |u - phi^-|.
std::vector<double> linear_heat_viscosity_sweep(const ScalarField& phi,
                                                std::span<const double> eps_list,
                                                const Window& window, double t_horizon,
                                                int n_steps);

}  // namespace stefanlab
