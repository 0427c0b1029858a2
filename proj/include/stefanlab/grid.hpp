// One-dimensional space lattice x time axis, scalar and space-time fields,
// discrete calculus (Laplacian, trapezoid quadrature) and norms.
#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace stefanlab {

struct BoundarySpec;  // solver.hpp

struct Grid1D {
    double x_lo = -1.0;
    double x_hi = 1.0;
    int n_cells = 0;  // >= 8
    double t_end = 1.0;
    int n_steps = 0;  // >= 1

    static Grid1D make(double x_lo, double x_hi, int n_cells, double t_end, int n_steps);

    double h() const { return (x_hi - x_lo) / n_cells; }
    double dt() const { return t_end / n_steps; }
    int n_nodes() const { return n_cells + 1; }
    int n_levels() const { return n_steps + 1; }
    double x(int i) const { return x_lo + i * h(); }
    double t(int n) const { return n * dt(); }

    bool same_layout(const Grid1D& o) const;
};

// Compact space-time rectangle; all theorem diagnostics are evaluated on such
// interior windows (the continuum statements are local).
struct Window {
    double x_lo = -0.75;
    double x_hi = 0.75;
    double t_lo = 0.1;
    double t_hi = 0.9;

    bool contains(double x, double t) const {
        return x >= x_lo && x <= x_hi && t >= t_lo && t <= t_hi;
    }
};

class ScalarField {
public:
    ScalarField() = default;  // empty placeholder; assign before use
    explicit ScalarField(const Grid1D& grid);  // zero-initialized
    ScalarField(const Grid1D& grid, std::vector<double> values);

    template <class F>
    static ScalarField sample(const Grid1D& grid, F&& fn) {
        ScalarField out(grid);
        for (int i = 0; i < grid.n_nodes(); ++i) out.values_[i] = fn(grid.x(i));
        return out;
    }

    const Grid1D& grid() const { return grid_; }
    int size() const { return static_cast<int>(values_.size()); }
    double operator[](int i) const { return values_[i]; }
    double& operator[](int i) { return values_[i]; }
    std::span<const double> values() const { return values_; }
    std::span<double> values() { return values_; }

    double sup_norm() const;
    bool all_finite() const;

private:
    Grid1D grid_;
    std::vector<double> values_;
};

class SpaceTimeField {
public:
    explicit SpaceTimeField(const Grid1D& grid);  // zero-initialized

    const Grid1D& grid() const { return grid_; }
    double at(int level, int node) const { return data_[idx(level, node)]; }
    double& at(int level, int node) { return data_[idx(level, node)]; }
    std::span<const double> level(int n) const {
        return {data_.data() + idx(n, 0), static_cast<std::size_t>(grid_.n_nodes())};
    }
    std::span<double> level(int n) {
        return {data_.data() + idx(n, 0), static_cast<std::size_t>(grid_.n_nodes())};
    }
    ScalarField slice(int level) const;
    void set_level(int n, std::span<const double> values);

    bool level_finite(int n) const;
    double sup_norm() const;

private:
    std::size_t idx(int level, int node) const {
        return static_cast<std::size_t>(level) * grid_.n_nodes() + node;
    }

    Grid1D grid_;
    std::vector<double> data_;
};

// Node/level index ranges covering a window (inclusive bounds).
struct WindowIndices {
    int node_lo, node_hi;
    int level_lo, level_hi;
};
WindowIndices window_indices(const Grid1D& grid, const Window& w);

// sup over the window of |a - b| after clamping both fields through `map`
// (e.g. positive part).  Fields must share the grid layout.
double sup_distance_on_window(const SpaceTimeField& a, const SpaceTimeField& b,
                              const Window& w, double (*map)(double));

double positive_part(double u);
double negative_part(double u);  // max(-u, 0), nonnegative

// Discrete Laplacian (f_{i-1} - 2 f_i + f_{i+1}) / h^2 with ghost values from
// the boundary conditions (Dirichlet: ghost = prescribed trace at time t;
// Neumann: reflected ghost).
ScalarField laplacian(const ScalarField& field, const BoundarySpec& bc, double t);

// Trapezoid rule in space over one level.
double integrate_space(const Grid1D& grid, std::span<const double> values);

// sqrt of the trapezoid quadrature of the square.
double l2_norm(const ScalarField& field);

// Trapezoid rule along the time axis at one node, between levels s and t.
double integrate_time(const SpaceTimeField& field, int node, int level_s, int level_t);

// Trapezoid quadrature in x and t of field(x,t) * weight(x,t).
double pair_space_time(const SpaceTimeField& field,
                       const std::function<double(double, double)>& weight);

}  // namespace stefanlab
