#include "stefanlab/grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "stefanlab/solver.hpp"

namespace stefanlab {

Grid1D Grid1D::make(double x_lo, double x_hi, int n_cells, double t_end, int n_steps) {
    if (!(x_hi > x_lo)) throw std::invalid_argument("grid: x_hi must exceed x_lo");
    if (n_cells < 8) throw std::invalid_argument("grid: n_cells must be >= 8");
    if (!(t_end > 0.0)) throw std::invalid_argument("grid: t_end must be > 0");
    if (n_steps < 1) throw std::invalid_argument("grid: n_steps must be >= 1");
    return Grid1D{x_lo, x_hi, n_cells, t_end, n_steps};
}

bool Grid1D::same_layout(const Grid1D& o) const {
    return x_lo == o.x_lo && x_hi == o.x_hi && n_cells == o.n_cells && t_end == o.t_end &&
           n_steps == o.n_steps;
}

ScalarField::ScalarField(const Grid1D& grid) : grid_(grid), values_(grid.n_nodes(), 0.0) {}

ScalarField::ScalarField(const Grid1D& grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
    if (static_cast<int>(values_.size()) != grid.n_nodes()) {
        throw std::invalid_argument("scalar field length does not match grid");
    }
    if (!all_finite()) throw std::invalid_argument("scalar field has non-finite entries");
}

double ScalarField::sup_norm() const {
    double m = 0.0;
    for (double v : values_) m = std::max(m, std::abs(v));
    return m;
}

bool ScalarField::all_finite() const {
    return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

SpaceTimeField::SpaceTimeField(const Grid1D& grid)
    : grid_(grid),
      data_(static_cast<std::size_t>(grid.n_levels()) * grid.n_nodes(), 0.0) {}

ScalarField SpaceTimeField::slice(int level) const {
    auto row = this->level(level);
    return ScalarField(grid_, std::vector<double>(row.begin(), row.end()));
}

void SpaceTimeField::set_level(int n, std::span<const double> values) {
    auto row = level(n);
    std::copy(values.begin(), values.end(), row.begin());
}

bool SpaceTimeField::level_finite(int n) const {
    auto row = level(n);
    return std::all_of(row.begin(), row.end(), [](double v) { return std::isfinite(v); });
}

double SpaceTimeField::sup_norm() const {
    double m = 0.0;
    for (double v : data_) m = std::max(m, std::abs(v));
    return m;
}

WindowIndices window_indices(const Grid1D& grid, const Window& w) {
    WindowIndices out{};
    const double h = grid.h();
    const double dt = grid.dt();
    out.node_lo = static_cast<int>(std::ceil((w.x_lo - grid.x_lo) / h - 1e-9));
    out.node_hi = static_cast<int>(std::floor((w.x_hi - grid.x_lo) / h + 1e-9));
    out.level_lo = static_cast<int>(std::ceil(w.t_lo / dt - 1e-9));
    out.level_hi = static_cast<int>(std::floor(w.t_hi / dt + 1e-9));
    out.node_lo = std::clamp(out.node_lo, 0, grid.n_cells);
    out.node_hi = std::clamp(out.node_hi, 0, grid.n_cells);
    out.level_lo = std::clamp(out.level_lo, 0, grid.n_steps);
    out.level_hi = std::clamp(out.level_hi, 0, grid.n_steps);
    return out;
}

double positive_part(double u) { return u > 0.0 ? u : 0.0; }
double negative_part(double u) { return u < 0.0 ? -u : 0.0; }

double sup_distance_on_window(const SpaceTimeField& a, const SpaceTimeField& b, const Window& w,
                              double (*map)(double)) {
    if (!a.grid().same_layout(b.grid())) {
        throw std::invalid_argument("sup_distance_on_window: grids differ");
    }
    const WindowIndices wi = window_indices(a.grid(), w);
    double m = 0.0;
    for (int n = wi.level_lo; n <= wi.level_hi; ++n) {
        for (int i = wi.node_lo; i <= wi.node_hi; ++i) {
            const double da = map ? map(a.at(n, i)) : a.at(n, i);
            const double db = map ? map(b.at(n, i)) : b.at(n, i);
            m = std::max(m, std::abs(da - db));
        }
    }
    return m;
}

ScalarField laplacian(const ScalarField& field, const BoundarySpec& bc, double t) {
    const Grid1D& g = field.grid();
    if (g.n_cells < 2) throw std::invalid_argument("laplacian: need at least 2 cells");
    const double h2 = g.h() * g.h();
    ScalarField out(g);
    const int n = g.n_cells;
    for (int i = 1; i < n; ++i) {
        out[i] = (field[i - 1] - 2.0 * field[i] + field[i + 1]) / h2;
    }
    auto ghost = [&](const EndpointBc& e, int reflected) {
        return e.kind == EndpointBc::Kind::dirichlet ? e.trace.eval(t) : field[reflected];
    };
    out[0] = (ghost(bc.left, 1) - 2.0 * field[0] + field[1]) / h2;
    out[n] = (field[n - 1] - 2.0 * field[n] + ghost(bc.right, n - 1)) / h2;
    return out;
}

double integrate_space(const Grid1D& grid, std::span<const double> values) {
    if (static_cast<int>(values.size()) != grid.n_nodes()) {
        throw std::invalid_argument("integrate_space: length mismatch");
    }
    double s = 0.5 * (values.front() + values.back());
    for (int i = 1; i < grid.n_cells; ++i) s += values[i];
    return s * grid.h();
}

double l2_norm(const ScalarField& field) {
    std::vector<double> sq(field.size());
    for (int i = 0; i < field.size(); ++i) sq[i] = field[i] * field[i];
    return std::sqrt(integrate_space(field.grid(), sq));
}

double integrate_time(const SpaceTimeField& field, int node, int level_s, int level_t) {
    const Grid1D& g = field.grid();
    if (level_s < 0 || level_t > g.n_steps || level_s > level_t) {
        throw std::invalid_argument("integrate_time: level range out of bounds");
    }
    if (level_s == level_t) return 0.0;
    double s = 0.5 * (field.at(level_s, node) + field.at(level_t, node));
    for (int n = level_s + 1; n < level_t; ++n) s += field.at(n, node);
    return s * g.dt();
}

double pair_space_time(const SpaceTimeField& field,
                       const std::function<double(double, double)>& weight) {
    const Grid1D& g = field.grid();
    double total = 0.0;
    for (int n = 0; n <= g.n_steps; ++n) {
        const double t = g.t(n);
        const double wt = (n == 0 || n == g.n_steps) ? 0.5 : 1.0;
        double row = 0.0;
        for (int i = 0; i <= g.n_cells; ++i) {
            const double wx = (i == 0 || i == g.n_cells) ? 0.5 : 1.0;
            row += wx * field.at(n, i) * weight(g.x(i), t);
        }
        total += wt * row;
    }
    return total * g.h() * g.dt();
}

}  // namespace stefanlab
