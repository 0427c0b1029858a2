#include "stefanlab/transforms.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace stefanlab {

SpaceTimeField compute_v(const SpaceTimeField& u, Epsilon eps) {
    const Grid1D& g = u.grid();
    SpaceTimeField v(g);
    for (int m = 0; m <= g.n_steps; ++m) {
        auto src = u.level(m);
        auto dst = v.level(m);
        for (int i = 0; i <= g.n_cells; ++i) dst[i] = alpha_eps(src[i], eps);
    }
    return v;
}

SpaceTimeField compute_w(const SpaceTimeField& v, int h_level) {
    const Grid1D& g = v.grid();
    if (h_level < 0 || h_level > g.n_steps) {
        throw std::invalid_argument("compute_w: cut level out of range");
    }
    SpaceTimeField w(g);
    const double dt = g.dt();
    for (int m = h_level + 1; m <= g.n_steps; ++m) {
        auto prev = w.level(m - 1);
        auto cur = w.level(m);
        auto v0 = v.level(m - 1);
        auto v1 = v.level(m);
        for (int i = 0; i <= g.n_cells; ++i) {
            cur[i] = prev[i] + 0.5 * dt * (v0[i] + v1[i]);
        }
    }
    return w;
}

SpaceTimeField compute_g(const SpaceTimeField& u, Epsilon eps, int h_level,
                         const NonlinearitySpec& f) {
    const Grid1D& g = u.grid();
    if (h_level < 0 || h_level > g.n_steps) {
        throw std::invalid_argument("compute_g: cut level out of range");
    }
    SpaceTimeField out(g);
    const double dt = g.dt();
    const double one_minus_eps = 1.0 - eps.value();
    auto u_cut = u.level(h_level);

    // running trapezoid integral of f(u) from the cut level
    std::vector<double> f_int(g.n_nodes(), 0.0);
    std::vector<double> f_prev(g.n_nodes());
    for (int i = 0; i <= g.n_cells; ++i) f_prev[i] = f.eval(u_cut[i]);

    {
        auto row = out.level(h_level);
        for (int i = 0; i <= g.n_cells; ++i) {
            row[i] = -one_minus_eps * negative_part(u_cut[i]) - u_cut[i];
        }
    }
    for (int m = h_level + 1; m <= g.n_steps; ++m) {
        auto um = u.level(m);
        auto row = out.level(m);
        for (int i = 0; i <= g.n_cells; ++i) {
            const double f_now = f.eval(um[i]);
            f_int[i] += 0.5 * dt * (f_prev[i] + f_now);
            f_prev[i] = f_now;
            row[i] = -one_minus_eps * negative_part(um[i]) - u_cut[i] - f_int[i];
        }
    }
    return out;
}

TransformedRun make_transformed(const SolverRun& run, const ProblemSpec& spec, int h_level) {
    TransformedRun tr{run.u, run.v, compute_w(run.v, h_level),
                      compute_g(run.u, spec.eps, h_level, spec.f), h_level, spec.eps, spec.f};
    return tr;
}

double w_equation_residual(const TransformedRun& tr) {
    const Grid1D& g = tr.w.grid();
    const double h2 = g.h() * g.h();
    const double dt = g.dt();
    double worst = 0.0;
    for (int m = tr.h_level + 1; m <= g.n_steps; ++m) {
        auto wm = tr.w.level(m);
        auto wp = tr.w.level(m - 1);
        auto gm = tr.g.level(m);
        for (int i = 1; i < g.n_cells; ++i) {
            const double lap = (wm[i - 1] - 2.0 * wm[i] + wm[i + 1]) / h2;
            const double ddt = (wm[i] - wp[i]) / dt;
            worst = std::max(worst, std::abs(lap - ddt - gm[i]));
        }
    }
    return worst;
}

}  // namespace stefanlab
