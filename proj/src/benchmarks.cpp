#include "stefanlab/benchmarks.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace stefanlab {

namespace {
constexpr double kSqrtPi = 1.7724538509055160273;
}

double erf(double x) {
    if (x < 0.0) return -erf(-x);
    if (x >= 3.0) return 1.0 - erfc(x);
    // Alternating series 2/sqrt(pi) * sum (-1)^n x^(2n+1) / (n! (2n+1)).
    const double x2 = x * x;
    double term = x;
    double sum = x;
    for (int n = 1; n < 200; ++n) {
        term *= -x2 / n;
        const double contrib = term / (2 * n + 1);
        sum += contrib;
        if (std::abs(contrib) < 1e-18 * std::abs(sum)) break;
    }
    return 2.0 / kSqrtPi * sum;
}

double erfc(double x) {
    if (x < 3.0) return 1.0 - erf(x);
    // sqrt(pi) e^{x^2} erfc(x) = 1/(x + (1/2)/(x + 1/(x + (3/2)/(x + ...))))
    // evaluated by backward recurrence.
    double r = 0.0;
    for (int k = 60; k >= 1; --k) {
        r = (0.5 * k) / (x + r);
    }
    return std::exp(-x * x) / kSqrtPi / (x + r);
}

double neumann_lambda(double u_b, double w0) {
    if (!(u_b > 0.0) || !(w0 > 0.0)) {
        throw std::invalid_argument("neumann_lambda: u_b and w0 must be > 0");
    }
    const double ratio = u_b / w0;
    auto fn = [&](double lam) { return kSqrtPi * lam * std::exp(lam * lam) * erf(lam) - ratio; };
    double lo = 1e-8, hi = 5.0;
    if (!(fn(lo) < 0.0) || !(fn(hi) > 0.0)) {
        throw std::invalid_argument("neumann_lambda: ratio u_b/w0 outside the bracket [1e-8, 5]");
    }
    for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
        const double mid = 0.5 * (lo + hi);
        (fn(mid) < 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

NeumannSolution NeumannSolution::make(double u_b, double w0) {
    NeumannSolution s;
    s.u_b = u_b;
    s.w0 = w0;
    s.lambda = neumann_lambda(u_b, w0);
    return s;
}

double NeumannSolution::eval(double x, double t) const {
    if (!(t > 0.0) || x < 0.0) {
        throw std::invalid_argument("neumann eval needs t > 0 and x >= 0");
    }
    if (x >= front(t)) return 0.0;
    return u_b * (1.0 - erf(x / (2.0 * std::sqrt(t))) / erf(lambda));
}

double NeumannSolution::front(double t) const { return 2.0 * lambda * std::sqrt(t); }

double NeumannSolution::front_speed(double t) const { return lambda / std::sqrt(t); }

double NeumannSolution::front_gradient(double t) const {
    return -u_b * std::exp(-lambda * lambda) / (erf(lambda) * kSqrtPi * std::sqrt(t));
}

NeumannEval neumann_eval(const NeumannSolution& sol, double x, double t) {
    return {sol.eval(x, t), sol.front(t)};
}

double PlanarWave::eval(double x, double t) const {
    const double xi = slope;
    if (!(t < -xi * x)) return 0.0;
    return amplitude * (1.0 - std::exp((t + xi * x) / (xi * xi)));
}

double PlanarWave::dt_(double x, double t) const {
    const double xi = slope;
    if (!(t < -xi * x)) return 0.0;
    return -amplitude * std::exp((t + xi * x) / (xi * xi)) / (xi * xi);
}

double PlanarWave::dx(double x, double t) const {
    const double xi = slope;
    if (!(t < -xi * x)) return 0.0;
    return -amplitude * std::exp((t + xi * x) / (xi * xi)) / xi;
}

double PlanarWave::dxx(double x, double t) const {
    const double xi = slope;
    if (!(t < -xi * x)) return 0.0;
    return -amplitude * std::exp((t + xi * x) / (xi * xi)) / (xi * xi);
}

SpaceTimeField sample_planar_wave(const PlanarWave& pw, const Grid1D& grid) {
    SpaceTimeField out(grid);
    for (int m = 0; m <= grid.n_steps; ++m) {
        auto row = out.level(m);
        for (int i = 0; i <= grid.n_cells; ++i) row[i] = pw.eval(grid.x(i), grid.t(m));
    }
    return out;
}

std::vector<double> linear_heat_viscosity_sweep(const ScalarField& phi,
                                                std::span<const double> eps_list,
                                                const Window& window, double t_horizon,
                                                int n_steps) {
    const Grid1D base = phi.grid();
    const Grid1D grid = Grid1D::make(base.x_lo, base.x_hi, base.n_cells, t_horizon, n_steps);
    const int n = grid.n_nodes();
    const double dt = grid.dt();
    const double h2 = grid.h() * grid.h();

    std::vector<double> target(n);
    for (int i = 0; i < n; ++i) target[i] = negative_part(phi[i]);

    const WindowIndices wi = window_indices(grid, window);

    std::vector<double> distances;
    distances.reserve(eps_list.size());
    for (double eps : eps_list) {
        const double c = eps * dt / h2;
        std::vector<double> u = target;
        std::vector<double> lower(n, -c), diag(n, 1.0 + 2.0 * c), upper(n, -c), rhs(n), next(n);
        lower[0] = 0.0;
        upper[0] = 0.0;
        diag[0] = 1.0;
        lower[n - 1] = 0.0;
        upper[n - 1] = 0.0;
        diag[n - 1] = 1.0;

        double sup = 0.0;
        for (int step = 0; step < n_steps; ++step) {
            rhs = u;
            rhs[0] = target[0];
            rhs[n - 1] = target[n - 1];
            std::vector<double> lo = lower, dg = diag, up = upper;
            // Thomas
            for (int i = 1; i < n; ++i) {
                const double m = lo[i] / dg[i - 1];
                dg[i] -= m * up[i - 1];
                rhs[i] -= m * rhs[i - 1];
            }
            next[n - 1] = rhs[n - 1] / dg[n - 1];
            for (int i = n - 2; i >= 0; --i) {
                next[i] = (rhs[i] - up[i] * next[i + 1]) / dg[i];
            }
            u.swap(next);
            for (int i = wi.node_lo; i <= wi.node_hi; ++i) {
                sup = std::max(sup, std::abs(u[i] - target[i]));
            }
        }
        distances.push_back(sup);
    }
    return distances;
}

}  // namespace stefanlab
