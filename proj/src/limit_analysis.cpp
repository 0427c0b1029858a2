#include "stefanlab/limit_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <optional>
#include <stdexcept>

namespace stefanlab {

namespace {

struct SupportRange {
    int node_lo, node_hi, level_lo, level_hi;
};

SupportRange support_range(const Grid1D& g, const TestFunction& eta) {
    Window w{eta.xc - eta.rx, eta.xc + eta.rx, eta.tc - eta.rt, eta.tc + eta.rt};
    const WindowIndices wi = window_indices(g, w);
    // widen by one node so the quadrature covers the closed support
    return {std::max(0, wi.node_lo - 1), std::min(g.n_cells, wi.node_hi + 1),
            std::max(0, wi.level_lo - 1), std::min(g.n_steps, wi.level_hi + 1)};
}

// Trapezoid quadrature restricted to the support box.  eta vanishes on the
// box edge, so plain h*dt weights agree with the full-grid trapezoid rule.
template <class Integrand>
double integrate_on_support(const Grid1D& g, const TestFunction& eta, Integrand&& fn) {
    const SupportRange r = support_range(g, eta);
    double total = 0.0;
    for (int m = r.level_lo; m <= r.level_hi; ++m) {
        const double t = g.t(m);
        double row = 0.0;
        for (int i = r.node_lo; i <= r.node_hi; ++i) {
            row += fn(m, i, g.x(i), t);
        }
        total += row;
    }
    return total * g.h() * g.dt();
}

double central_dx_positive(const SpaceTimeField& u, int m, int i) {
    // clamp first, then difference: u+ is the H^1 object in the weak form
    const double up = positive_part(u.at(m, std::min(i + 1, u.grid().n_cells)));
    const double um = positive_part(u.at(m, std::max(i - 1, 0)));
    const int span = std::min(i + 1, u.grid().n_cells) - std::max(i - 1, 0);
    return (up - um) / (span * u.grid().h());
}

}  // namespace

std::vector<double> default_epsilon_list() {
    std::vector<double> eps;
    double v = 0.1;
    for (int k = 0; k < 7; ++k) {
        eps.push_back(v);
        v /= 3.0;
    }
    return eps;
}

double delta_rule(double eps, double scale, double floor) { return scale * eps + floor; }

void EpsilonSweep::validate() const {
    if (epsilons.size() < 3) throw std::invalid_argument("sweep needs at least 3 epsilons");
    for (std::size_t k = 0; k < epsilons.size(); ++k) {
        if (!(epsilons[k] > 0.0) || !(epsilons[k] <= 1.0)) {
            throw std::invalid_argument("sweep epsilons must lie in (0, 1]");
        }
        if (k > 0 && !(epsilons[k] < epsilons[k - 1])) {
            throw std::invalid_argument("sweep epsilons must be strictly decreasing");
        }
    }
    const Grid1D& g = base.grid;
    if (!(window.x_lo > g.x_lo && window.x_hi < g.x_hi && window.t_lo > 0.0 &&
          window.t_hi < g.t_end && window.x_lo < window.x_hi && window.t_lo < window.t_hi)) {
        throw std::invalid_argument("sweep window must be strictly interior");
    }
}

SweepReport run_sweep(const EpsilonSweep& sweep) {
    sweep.validate();
    const int k_count = static_cast<int>(sweep.epsilons.size());

    SweepReport report;
    report.epsilons = sweep.epsilons;
    report.dictionary = make_dictionary(sweep.window);
    report.f = sweep.base.f;
    report.runs.reserve(k_count);

    // independent solves, fanned out in fixed batches so outputs do not
    // depend on the worker count
    const int workers = std::max(1, sweep.parallelism);
    std::vector<std::optional<SolverRun>> slots(k_count);
    for (int start = 0; start < k_count; start += workers) {
        const int stop = std::min(k_count, start + workers);
        std::vector<std::future<SolverRun>> batch;
        for (int k = start; k < stop; ++k) {
            ProblemSpec spec = sweep.base.with_epsilon(Epsilon(sweep.epsilons[k]));
            batch.push_back(std::async(workers > 1 ? std::launch::async : std::launch::deferred,
                                       [spec = std::move(spec), &sweep]() {
                                           return solve(spec, sweep.newton);
                                       }));
        }
        for (int k = start; k < stop; ++k) {
            try {
                slots[k] = batch[k - start].get();
            } catch (SolverError& e) {
                throw SolverError(e.code,
                                  std::string(e.what()) + " (eps = " +
                                      std::to_string(sweep.epsilons[k]) + ")",
                                  e.level, e.residual);
            }
        }
    }
    for (auto& s : slots) report.runs.push_back(std::move(*s));

    for (int k = 0; k + 1 < k_count; ++k) {
        report.cauchy_sup.push_back(sup_distance_on_window(report.runs[k].u, report.runs[k + 1].u,
                                                           sweep.window, positive_part));
    }

    const Grid1D& g = sweep.base.grid;
    const int n_eta = static_cast<int>(report.dictionary.size());
    report.pairing_table.assign(k_count, std::vector<double>(n_eta, 0.0));
    for (int k = 0; k < k_count; ++k) {
        const SpaceTimeField& u = report.runs[k].u;
        for (int j = 0; j < n_eta; ++j) {
            const TestFunction& eta = report.dictionary[j];
            report.pairing_table[k][j] =
                integrate_on_support(g, eta, [&](int m, int i, double x, double t) {
                    return negative_part(u.at(m, i)) * eta.eval(x, t);
                });
        }
    }

    report.grad_l2_table.assign(k_count, std::vector<double>(n_eta, 0.0));
    report.identity_residual_table.assign(k_count, std::vector<double>(n_eta, 0.0));
    report.grad_dist_table.assign(k_count - 1, std::vector<double>(n_eta, 0.0));
    for (int j = 0; j < n_eta; ++j) {
        GradientDiagnostics diag = gradient_l2_convergence(report, report.dictionary[j]);
        for (int k = 0; k < k_count; ++k) {
            report.grad_l2_table[k][j] = diag.energy[k];
            report.identity_residual_table[k][j] = diag.identity_residual[k];
        }
        for (int k = 0; k + 1 < k_count; ++k) {
            report.grad_dist_table[k][j] = diag.dist_to_finest[k];
        }
    }
    return report;
}

CauchyVerdict positive_part_cauchy(const SweepReport& report, double threshold) {
    CauchyVerdict verdict;
    verdict.threshold = threshold;
    const auto& c = report.cauchy_sup;
    if (c.empty()) return verdict;
    verdict.final_value = c.back();
    verdict.tail_start = static_cast<int>(c.size()) / 2;
    verdict.tail_decreasing = true;
    for (std::size_t k = verdict.tail_start; k + 1 < c.size(); ++k) {
        if (c[k + 1] > c[k] * (1.0 + 1e-12)) verdict.tail_decreasing = false;
    }
    verdict.pass = verdict.tail_decreasing && verdict.final_value <= threshold;
    return verdict;
}

double weak_star_stabilization(const SweepReport& report) {
    const int k_count = report.size();
    if (k_count < 2) return 0.0;
    double worst = 0.0;
    for (std::size_t j = 0; j < report.dictionary.size(); ++j) {
        worst = std::max(worst, std::abs(report.pairing_table[k_count - 1][j] -
                                         report.pairing_table[k_count - 2][j]));
    }
    return worst;
}

double OdeResidualField::max_applicable() const {
    double m = 0.0;
    for (std::size_t i = 0; i < residual.size(); ++i) {
        if (applicable[i]) m = std::max(m, residual[i]);
    }
    return m;
}

long OdeResidualField::applicable_count() const {
    return std::count(applicable.begin(), applicable.end(), char(1));
}

OdeResidualField negative_ode_residual(const SpaceTimeField& u, const NonlinearitySpec& f,
                                       int level_s, int level_t, double delta) {
    const Grid1D& g = u.grid();
    if (!(level_s < level_t) || level_s < 0 || level_t > g.n_steps) {
        throw std::invalid_argument("negative_ode_residual: bad level range");
    }
    if (!(delta > 0.0)) throw std::invalid_argument("negative_ode_residual: delta must be > 0");

    OdeResidualField out;
    out.residual.assign(g.n_nodes(), 0.0);
    out.applicable.assign(g.n_nodes(), 1);
    const double dt = g.dt();
    for (int i = 0; i <= g.n_cells; ++i) {
        for (int m = 0; m <= level_t; ++m) {
            if (u.at(m, i) >= delta) {
                out.applicable[i] = 0;
                break;
            }
        }
        if (!out.applicable[i]) continue;
        double f_int = 0.0;
        double f_prev = f.eval(u.at(level_s, i));
        for (int m = level_s + 1; m <= level_t; ++m) {
            const double f_now = f.eval(u.at(m, i));
            f_int += 0.5 * dt * (f_prev + f_now);
            f_prev = f_now;
        }
        out.residual[i] = std::abs(u.at(level_t, i) - u.at(level_s, i) - f_int);
    }
    return out;
}

OdeCleanResult negative_ode_residual_clean(const SpaceTimeField& u, const NonlinearitySpec& f,
                                           int level_s, int level_t, double delta,
                                           int buffer_cells, const Window& window) {
    const Grid1D& g = u.grid();
    OdeResidualField base = negative_ode_residual(u, f, level_s, level_t, delta);

    std::vector<char> ever_positive(g.n_nodes(), 0);
    for (int i = 0; i <= g.n_cells; ++i) {
        for (int m = 0; m <= g.n_steps; ++m) {
            if (u.at(m, i) >= delta) {
                ever_positive[i] = 1;
                break;
            }
        }
    }
    const WindowIndices wi = window_indices(g, window);
    OdeCleanResult result;
    for (int i = wi.node_lo; i <= wi.node_hi; ++i) {
        if (!base.applicable[i] || ever_positive[i]) continue;
        bool near_front = false;
        for (int j = std::max(0, i - buffer_cells);
             j <= std::min(g.n_cells, i + buffer_cells) && !near_front; ++j) {
            near_front = ever_positive[j] != 0;
        }
        if (near_front) continue;
        ++result.node_count;
        result.max_residual = std::max(result.max_residual, base.residual[i]);
    }
    return result;
}

GradientDiagnostics gradient_l2_convergence(const SweepReport& report, const TestFunction& eta) {
    const int k_count = report.size();
    GradientDiagnostics diag;
    diag.energy.resize(k_count);
    diag.identity_residual.resize(k_count);
    diag.dist_to_finest.resize(k_count - 1);

    const SpaceTimeField& u_star = report.finest().u;
    const Grid1D& g = u_star.grid();
    for (int k = 0; k < k_count; ++k) {
        const SpaceTimeField& u = report.runs[k].u;
        diag.energy[k] = integrate_on_support(g, eta, [&](int m, int i, double x, double t) {
            const double du = central_dx_positive(u, m, i);
            const double e = eta.eval(x, t);
            return du * du * e * e;
        });
        diag.identity_residual[k] =
            std::abs(integrate_on_support(g, eta, [&](int m, int i, double x, double t) {
                const double up = positive_part(u.at(m, i));
                const double du = central_dx_positive(u, m, i);
                const double e = eta.eval(x, t);
                const double et = eta.dt_(x, t);
                const double ex = eta.dx(x, t);
                return -up * up * e * et + du * du * e * e + 2.0 * e * up * du * ex -
                       report.f.eval(up) * up * e * e;
            }));
    }
    for (int k = 0; k + 1 < k_count; ++k) {
        const SpaceTimeField& u = report.runs[k].u;
        diag.dist_to_finest[k] =
            integrate_on_support(g, eta, [&](int m, int i, double x, double t) {
                const double du = central_dx_positive(u, m, i) - central_dx_positive(u_star, m, i);
                const double e = eta.eval(x, t);
                return du * du * e * e;
            });
    }
    return diag;
}

}  // namespace stefanlab
