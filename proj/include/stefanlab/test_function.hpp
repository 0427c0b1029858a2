// Smooth compactly supported test functions for weak-form pairings: product
// bumps exp(-1/(1-s^2)) with closed-form first and second derivatives.
#pragma once

#include <vector>

#include "stefanlab/grid.hpp"

namespace stefanlab {

// One-dimensional bump profile b(s) = exp(-1/(1-s^2)) for |s| < 1, else 0.
double bump(double s);
double bump_d1(double s);
double bump_d2(double s);

// Spatial bump eta(x) = amp * b((x - center)/radius), used by the energy
// identity monitor.
struct SpaceBump {
    double center = 0.0;
    double radius = 0.5;
    double amplitude = 1.0;

    double eval(double x) const;
    double dx(double x) const;
    bool supported_inside(double x_lo, double x_hi) const;
};

// Space-time product bump eta(x,t).  Support is the open rectangle
// (xc - rx, xc + rx) x (tc - rt, tc + rt), required strictly inside the
// open space-time domain.
struct TestFunction {
    double xc = 0.0;
    double tc = 0.5;
    double rx = 0.25;
    double rt = 0.2;
    double amplitude = 1.0;

    double eval(double x, double t) const;
    double dt_(double x, double t) const;
    double dx(double x, double t) const;
    double dxx(double x, double t) const;

    bool supported_inside(const Window& w) const;
};

void validate_support(const TestFunction& eta, const Grid1D& grid);

// Fixed dictionary: 3 x 3 lattice of centers times 2 radius pairs inside the
// window (18 functions).  The finite dictionary is the desk-scale stand-in
// for "all eta"; callers must size tables from the returned vector.
std::vector<TestFunction> make_dictionary(const Window& w);

}  // namespace stefanlab
