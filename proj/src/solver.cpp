#include "stefanlab/solver.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace stefanlab {

namespace {

// Thomas algorithm for a tridiagonal system; diag/rhs are overwritten.
void solve_tridiagonal(std::vector<double>& lower, std::vector<double>& diag,
                       std::vector<double>& upper, std::vector<double>& rhs,
                       std::vector<double>& out) {
    const std::size_t n = diag.size();
    for (std::size_t i = 1; i < n; ++i) {
        const double m = lower[i] / diag[i - 1];
        diag[i] -= m * upper[i - 1];
        rhs[i] -= m * rhs[i - 1];
    }
    out[n - 1] = rhs[n - 1] / diag[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) {
        out[i] = (rhs[i] - upper[i] * out[i + 1]) / diag[i];
    }
}

double trace_sup(const BoundaryTrace& trace) {
    double m = 0.0;
    for (const auto& [t, v] : trace.knots) {
        (void)t;
        m = std::max(m, std::abs(v));
    }
    return m;
}

double effective_lambda(const ProblemSpec& spec) {
    double lam = spec.lambda_bound;
    if (spec.bc.left.kind == EndpointBc::Kind::dirichlet) {
        lam = std::max(lam, trace_sup(spec.bc.left.trace));
    }
    if (spec.bc.right.kind == EndpointBc::Kind::dirichlet) {
        lam = std::max(lam, trace_sup(spec.bc.right.trace));
    }
    return lam;
}

void check_bounds(const ProblemSpec& spec, std::span<const double> u, int level) {
    for (double val : u) {
        if (!std::isfinite(val)) {
            throw SolverError(SolverErrorCode::non_finite_state,
                              "non-finite state at time level " + std::to_string(level), level);
        }
    }
    if (!spec.monitor_bounds) return;
    const double lam = effective_lambda(spec);
    const double slack = 1e-8 * std::max(1.0, lam);
    const double lo = -lam - slack;
    const double hi = std::max(lam, 1.0) + slack;
    for (double val : u) {
        if (val < lo || val > hi) {
            throw SolverError(SolverErrorCode::bound_exceeded,
                              "a-priori bound violated at time level " + std::to_string(level) +
                                  ": u = " + std::to_string(val) + " outside [" +
                                  std::to_string(lo) + ", " + std::to_string(hi) + "]",
                              level);
        }
    }
}

}  // namespace

double BoundaryTrace::eval(double t) const {
    if (knots.empty()) return 0.0;
    if (t <= knots.front().first) return knots.front().second;
    if (t >= knots.back().first) return knots.back().second;
    for (std::size_t i = 1; i < knots.size(); ++i) {
        if (t <= knots[i].first) {
            const auto& [t0, v0] = knots[i - 1];
            const auto& [t1, v1] = knots[i];
            const double w = (t - t0) / (t1 - t0);
            return v0 + w * (v1 - v0);
        }
    }
    return knots.back().second;
}

EndpointBc EndpointBc::dirichlet(BoundaryTrace trace) {
    if (trace.knots.empty()) throw std::invalid_argument("dirichlet trace needs knots");
    for (std::size_t i = 0; i < trace.knots.size(); ++i) {
        if (!std::isfinite(trace.knots[i].second)) {
            throw std::invalid_argument("dirichlet trace values must be finite");
        }
        if (i > 0 && !(trace.knots[i].first > trace.knots[i - 1].first)) {
            throw std::invalid_argument("dirichlet trace knots must be increasing in t");
        }
    }
    EndpointBc e;
    e.kind = Kind::dirichlet;
    e.trace = std::move(trace);
    return e;
}

EndpointBc EndpointBc::dirichlet_constant(double value) {
    return dirichlet(BoundaryTrace::constant(value));
}

ProblemSpec ProblemSpec::make(Grid1D grid, Epsilon eps, NonlinearitySpec f, ScalarField u0,
                              BoundarySpec bc, double lambda_bound, bool monitor_bounds) {
    if (!(lambda_bound > 0.0)) throw std::invalid_argument("lambda bound must be > 0");
    if (!u0.grid().same_layout(grid)) throw std::invalid_argument("u0 grid does not match");
    if (u0.sup_norm() > lambda_bound * (1.0 + 1e-12)) {
        throw std::invalid_argument("|u0| exceeds the a-priori bound lambda");
    }
    auto check_compat = [&](const EndpointBc& e, int node) {
        if (e.kind != EndpointBc::Kind::dirichlet) return;
        if (std::abs(e.trace.eval(0.0) - u0[node]) > 1e-12) {
            throw std::invalid_argument("dirichlet trace at t=0 incompatible with initial data");
        }
    };
    check_compat(bc.left, 0);
    check_compat(bc.right, grid.n_cells);
    return ProblemSpec{std::move(grid), eps,          std::move(f),
                       std::move(u0),   std::move(bc), lambda_bound,
                       monitor_bounds};
}

ProblemSpec ProblemSpec::with_epsilon(Epsilon new_eps) const {
    ProblemSpec out = *this;
    out.eps = new_eps;
    return out;
}

ScalarField step_implicit(const ScalarField& v_now, const ProblemSpec& spec,
                          const NewtonParams& params, double t_next, NewtonStats* stats) {
    const Grid1D& g = spec.grid;
    if (!v_now.grid().same_layout(g)) throw std::invalid_argument("step_implicit: grid mismatch");
    const int n = g.n_nodes();
    const double dt = g.dt();
    const double c = dt / (g.h() * g.h());
    const Epsilon eps = spec.eps;

    const bool left_dirichlet = spec.bc.left.kind == EndpointBc::Kind::dirichlet;
    const bool right_dirichlet = spec.bc.right.kind == EndpointBc::Kind::dirichlet;
    const double left_value = left_dirichlet ? alpha_eps(spec.bc.left.trace.eval(t_next), eps) : 0.0;
    const double right_value =
        right_dirichlet ? alpha_eps(spec.bc.right.trace.eval(t_next), eps) : 0.0;

    // rhs = beta(v_now) + dt * f(beta(v_now)); the reaction term is explicit so
    // the Newton system stays piecewise linear.
    std::vector<double> rhs(n);
    for (int i = 0; i < n; ++i) {
        const double u = beta_eps(v_now[i], eps);
        rhs[i] = u + dt * spec.f.eval(u);
    }

    std::vector<double> v(v_now.values().begin(), v_now.values().end());
    std::vector<double> residual(n), lower(n), diag(n), upper(n), delta(n), rhs_lin(n);

    auto compute_residual = [&](const std::vector<double>& w, std::vector<double>& out) {
        for (int i = 1; i < n - 1; ++i) {
            out[i] = beta_eps(w[i], eps) - c * (w[i - 1] - 2.0 * w[i] + w[i + 1]) - rhs[i];
        }
        out[0] = left_dirichlet ? w[0] - left_value
                                : beta_eps(w[0], eps) - c * (2.0 * w[1] - 2.0 * w[0]) - rhs[0];
        out[n - 1] = right_dirichlet
                         ? w[n - 1] - right_value
                         : beta_eps(w[n - 1], eps) - c * (2.0 * w[n - 2] - 2.0 * w[n - 1]) -
                               rhs[n - 1];
    };

    auto max_norm = [](const std::vector<double>& w) {
        double m = 0.0;
        for (double x : w) m = std::max(m, std::abs(x));
        return m;
    };

    compute_residual(v, residual);
    double res_norm = max_norm(residual);
    int iter = 0;
    while (res_norm > params.tol) {
        if (iter >= params.max_iter) {
            throw SolverError(SolverErrorCode::newton_diverged,
                              "Newton did not reach tolerance " + std::to_string(params.tol) +
                                  " in " + std::to_string(params.max_iter) +
                                  " iterations (residual " + std::to_string(res_norm) + ")",
                              -1, res_norm);
        }
        for (int i = 1; i < n - 1; ++i) {
            lower[i] = -c;
            diag[i] = beta_eps_slope(v[i], eps) + 2.0 * c;
            upper[i] = -c;
        }
        if (left_dirichlet) {
            diag[0] = 1.0;
            upper[0] = 0.0;
        } else {
            diag[0] = beta_eps_slope(v[0], eps) + 2.0 * c;
            upper[0] = -2.0 * c;
        }
        if (right_dirichlet) {
            diag[n - 1] = 1.0;
            lower[n - 1] = 0.0;
        } else {
            diag[n - 1] = beta_eps_slope(v[n - 1], eps) + 2.0 * c;
            lower[n - 1] = -2.0 * c;
        }
        for (int i = 0; i < n; ++i) rhs_lin[i] = -residual[i];
        solve_tridiagonal(lower, diag, upper, rhs_lin, delta);
        for (int i = 0; i < n; ++i) v[i] += delta[i];
        compute_residual(v, residual);
        res_norm = max_norm(residual);
        ++iter;
    }

    if (stats) {
        stats->max_iterations_per_step = std::max(stats->max_iterations_per_step, iter);
        stats->total_iterations += iter;
        stats->worst_residual = std::max(stats->worst_residual, res_norm);
    }
    return ScalarField(g, std::move(v));
}

SolverRun solve(const ProblemSpec& spec, const NewtonParams& params) {
    const Grid1D& g = spec.grid;
    SolverRun run(g);
    run.u.set_level(0, spec.u0.values());
    ScalarField v = ScalarField::sample(g, [&](double) { return 0.0; });
    for (int i = 0; i < g.n_nodes(); ++i) v[i] = alpha_eps(spec.u0[i], spec.eps);
    run.v.set_level(0, v.values());

    for (int level = 1; level <= g.n_steps; ++level) {
        const double t_next = g.t(level);
        try {
            v = step_implicit(v, spec, params, t_next, &run.stats);
        } catch (SolverError& e) {
            e.level = level;
            throw;
        }
        auto vrow = run.v.level(level);
        auto urow = run.u.level(level);
        for (int i = 0; i < g.n_nodes(); ++i) {
            vrow[i] = v[i];
            urow[i] = beta_eps(v[i], spec.eps);
        }
        check_bounds(spec, urow, level);
    }
    return run;
}

SpaceTimeField solve_explicit_oracle(const ProblemSpec& spec) {
    const Grid1D& g = spec.grid;
    const double h2 = g.h() * g.h();
    const double dt = g.dt();
    const double cfl_limit = h2 / (2.0 * std::max(1.0, spec.eps.value()));
    if (dt > cfl_limit * (1.0 + 1e-12)) {
        throw SolverError(SolverErrorCode::cfl_violation,
                          "explicit oracle needs dt <= " + std::to_string(cfl_limit) +
                              ", got " + std::to_string(dt));
    }

    SpaceTimeField u(g);
    u.set_level(0, spec.u0.values());
    const int n = g.n_nodes();
    std::vector<double> w(n);
    for (int level = 1; level <= g.n_steps; ++level) {
        auto prev = u.level(level - 1);
        auto next = u.level(level);
        for (int i = 0; i < n; ++i) w[i] = alpha_eps(prev[i], spec.eps);
        for (int i = 1; i < n - 1; ++i) {
            const double lap = (w[i - 1] - 2.0 * w[i] + w[i + 1]) / h2;
            next[i] = prev[i] + dt * (lap + spec.f.eval(prev[i]));
        }
        if (spec.bc.left.kind == EndpointBc::Kind::dirichlet) {
            next[0] = spec.bc.left.trace.eval(g.t(level));
        } else {
            const double lap = (2.0 * w[1] - 2.0 * w[0]) / h2;
            next[0] = prev[0] + dt * (lap + spec.f.eval(prev[0]));
        }
        if (spec.bc.right.kind == EndpointBc::Kind::dirichlet) {
            next[n - 1] = spec.bc.right.trace.eval(g.t(level));
        } else {
            const double lap = (2.0 * w[n - 2] - 2.0 * w[n - 1]) / h2;
            next[n - 1] = prev[n - 1] + dt * (lap + spec.f.eval(prev[n - 1]));
        }
        check_bounds(spec, next, level);
    }
    return u;
}

double energy_identity_residual(const SpaceTimeField& u, const SpaceBump& eta,
                                const ProblemSpec& spec) {
    const Grid1D& g = u.grid();
    if (!eta.supported_inside(g.x_lo, g.x_hi)) {
        throw std::invalid_argument("energy identity: bump support not inside the interval");
    }
    const int n = g.n_nodes();
    const double h = g.h();
    const double dt = g.dt();
    const double eps = spec.eps.value();

    std::vector<double> eta_node(n);
    for (int i = 0; i < n; ++i) eta_node[i] = eta.eval(g.x(i));

    auto energy = [&](std::span<const double> row) {
        std::vector<double> integrand(n);
        for (int i = 0; i < n; ++i) integrand[i] = row[i] * row[i] * eta_node[i] * eta_node[i];
        return 0.5 * integrate_space(g, integrand);
    };

    // Cell-difference gradient terms; with discrete gradients of the nodal eta
    // the two terms cancel exactly on constant fields.
    auto gradient_terms = [&](std::span<const double> row, double (*part)(double)) {
        double grad_sq = 0.0;
        double field_sq = 0.0;
        for (int i = 0; i + 1 < n; ++i) {
            const double p0 = part(row[i]);
            const double p1 = part(row[i + 1]);
            const double d_pe = (p1 * eta_node[i + 1] - p0 * eta_node[i]) / h;
            const double d_e = (eta_node[i + 1] - eta_node[i]) / h;
            const double pm = 0.5 * (p0 + p1);
            grad_sq += d_pe * d_pe;
            field_sq += pm * pm * d_e * d_e;
        }
        return std::pair{grad_sq * h, field_sq * h};
    };

    double worst = 0.0;
    double e_prev = energy(u.level(0));
    for (int m = 1; m <= g.n_steps; ++m) {
        auto row = u.level(m);
        const double e_now = energy(row);
        const double lhs = (e_now - e_prev) / dt;

        auto [gp, fp] = gradient_terms(row, positive_part);
        auto [gm, fm] = gradient_terms(row, negative_part);
        std::vector<double> reaction(n);
        for (int i = 0; i < n; ++i) {
            reaction[i] = spec.f.eval(row[i]) * row[i] * eta_node[i] * eta_node[i];
        }
        const double rhs = -gp + fp - eps * gm + eps * fm + integrate_space(g, reaction);

        worst = std::max(worst, std::abs(lhs - rhs));
        e_prev = e_now;
    }
    return worst;
}

ComparisonReport comparison_check(const SpaceTimeField& run_lo, const SpaceTimeField& run_hi,
                                  double tol) {
    if (!run_lo.grid().same_layout(run_hi.grid())) {
        throw std::invalid_argument("comparison_check: incompatible grids");
    }
    const Grid1D& g = run_lo.grid();
    ComparisonReport report;
    report.min_gap = run_hi.at(0, 0) - run_lo.at(0, 0);
    for (int m = 0; m <= g.n_steps; ++m) {
        for (int i = 0; i <= g.n_cells; ++i) {
            const double gap = run_hi.at(m, i) - run_lo.at(m, i);
            report.min_gap = std::min(report.min_gap, gap);
            if (gap < -tol) {
                ++report.violations;
                report.worst_violation = std::max(report.worst_violation, -gap - tol);
            }
        }
    }
    return report;
}

}  // namespace stefanlab
