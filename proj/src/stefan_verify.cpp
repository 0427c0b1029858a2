#include "stefanlab/stefan_verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace stefanlab {

int FreeBoundary::level_of(int node) const {
    if (never(node)) return grid.n_steps + 1;
    return static_cast<int>(std::lround(waiting_time[node] / grid.dt()));
}

FreeBoundary extract_waiting_time(const SpaceTimeField& u, double delta, double eps) {
    if (!(delta > 0.0)) throw std::invalid_argument("extract_waiting_time: delta must be > 0");
    const Grid1D& g = u.grid();
    FreeBoundary fb;
    fb.grid = g;
    fb.delta = delta;
    fb.eps = eps;
    fb.waiting_time.assign(g.n_nodes(), FreeBoundary::kNever);
    for (int i = 0; i <= g.n_cells; ++i) {
        // earliest level from which u stays >= delta through the end
        int first = g.n_steps + 1;
        for (int m = g.n_steps; m >= 0; --m) {
            if (u.at(m, i) >= delta) {
                first = m;
            } else {
                break;
            }
        }
        if (first <= g.n_steps) fb.waiting_time[i] = first * g.dt();
    }
    return fb;
}

long monotonicity_violations(const SpaceTimeField& u, double delta) {
    if (!(delta > 0.0)) throw std::invalid_argument("monotonicity_violations: delta must be > 0");
    const Grid1D& g = u.grid();
    long count = 0;
    const double half = 0.5 * delta;
    std::vector<double> suffix_min(g.n_levels());
    for (int i = 0; i <= g.n_cells; ++i) {
        suffix_min[g.n_steps] = u.at(g.n_steps, i);
        for (int m = g.n_steps - 1; m >= 0; --m) {
            suffix_min[m] = std::min(u.at(m, i), suffix_min[m + 1]);
        }
        for (int m = 0; m < g.n_steps; ++m) {
            if (u.at(m, i) >= delta && suffix_min[m + 1] < half) ++count;
        }
    }
    return count;
}

double LatentHeatField::latent_at(double x) const {
    const double h = grid.h();
    const double pos = (x - grid.x_lo) / h;
    const int i = std::clamp(static_cast<int>(std::floor(pos)), 0, grid.n_cells - 1);
    const double w = pos - i;
    return (1.0 - w) * latent(i) + w * latent(i + 1);
}

LatentHeatField compute_W(const ScalarField& u0, const SpaceTimeField& fbar_proxy,
                          const FreeBoundary& fb) {
    const Grid1D& g = fbar_proxy.grid();
    if (!u0.grid().same_layout(g)) throw std::invalid_argument("compute_W: grid mismatch");
    LatentHeatField out;
    out.grid = g;
    out.w_raw.assign(g.n_nodes(), 0.0);
    out.never_flag.assign(g.n_nodes(), 0);
    for (int i = 0; i <= g.n_cells; ++i) {
        int level = fb.level_of(i);
        if (level > g.n_steps) {
            level = g.n_steps;  // never melts: integrate to the horizon and flag
            out.never_flag[i] = 1;
        }
        out.w_raw[i] = -u0[i] - integrate_time(fbar_proxy, i, 0, level);
    }
    return out;
}

std::vector<double> stefan_weak_residual(const SpaceTimeField& u_plus, const LatentHeatField& W,
                                         const NonlinearitySpec& f,
                                         const std::vector<TestFunction>& dictionary,
                                         double delta) {
    const Grid1D& g = u_plus.grid();
    if (!W.grid.same_layout(g)) throw std::invalid_argument("stefan_weak_residual: grid mismatch");
    std::vector<double> residuals;
    residuals.reserve(dictionary.size());
    for (const TestFunction& eta : dictionary) {
        validate_support(eta, g);
        double total = 0.0;
        for (int m = 0; m <= g.n_steps; ++m) {
            const double t = g.t(m);
            if (t < eta.tc - eta.rt || t > eta.tc + eta.rt) continue;
            double row = 0.0;
            for (int i = 0; i <= g.n_cells; ++i) {
                const double x = g.x(i);
                if (x < eta.xc - eta.rx || x > eta.xc + eta.rx) continue;
                const double up = u_plus.at(m, i);
                const double beta = up > delta ? up : -W.latent(i);
                row += beta * eta.dt_(x, t) + up * eta.dxx(x, t) + f.eval(up) * eta.eval(x, t);
            }
            total += row;
        }
        residuals.push_back(std::abs(total * g.h() * g.dt()));
    }
    return residuals;
}

double w_limit_equation_residual(const TransformedRun& tr, const LatentHeatField& W,
                                 const FreeBoundary& fb, const NonlinearitySpec& f) {
    const Grid1D& g = tr.w.grid();
    if (tr.h_level != 0) {
        throw std::invalid_argument("w_limit_equation_residual: transform must be cut at 0");
    }
    const double h2 = g.h() * g.h();
    const double dt = g.dt();
    double worst = 0.0;
    for (int i = 1; i < g.n_cells; ++i) {
        if (fb.never(i)) continue;
        const int melt_level = fb.level_of(i);
        // running trapezoid integral of f(u) from the melt level
        double f_int = 0.0;
        double f_prev = f.eval(tr.u.at(std::min(melt_level, g.n_steps), i));
        for (int m = melt_level + 1; m <= g.n_steps; ++m) {
            const double f_now = f.eval(tr.u.at(m, i));
            f_int += 0.5 * dt * (f_prev + f_now);
            f_prev = f_now;
            if (m < melt_level + 3) continue;  // skip the 2 dt boundary layer
            auto wm = tr.w.level(m);
            auto wp = tr.w.level(m - 1);
            const double lap = (wm[i - 1] - 2.0 * wm[i] + wm[i + 1]) / h2;
            const double ddt = (wm[i] - wp[i]) / dt;
            const double rhs = W.w_raw[i] - f_int;
            worst = std::max(worst, std::abs(lap - ddt - rhs));
        }
    }
    return worst;
}

double FrontFluxReport::max_mismatch_mid(const Grid1D& grid, double mid_lo, double mid_hi) const {
    const double t0 = mid_lo * grid.t_end;
    const double t1 = mid_hi * grid.t_end;
    double worst = 0.0;
    for (std::size_t k = 0; k < levels.size(); ++k) {
        const double t = levels[k] * grid.dt();
        if (t >= t0 && t <= t1) worst = std::max(worst, mismatch[k]);
    }
    return worst;
}

FrontFluxReport front_flux_check(const SpaceTimeField& u, const FreeBoundary& fb,
                                 const LatentHeatField& W, const FrontFluxParams& params) {
    const Grid1D& g = u.grid();
    const double h = g.h();
    const double delta = fb.delta;

    // crossing position per level: rightmost node with u >= delta whose right
    // neighbor is below delta, refined by linear interpolation
    std::vector<double> s(g.n_levels(), std::numeric_limits<double>::quiet_NaN());
    bool any = false;
    for (int m = 0; m <= g.n_steps; ++m) {
        for (int i = g.n_cells - 1; i >= 0; --i) {
            const double a = u.at(m, i);
            const double b = u.at(m, i + 1);
            if (a >= delta && b < delta) {
                const double w = (a - delta) / (a - b);
                s[m] = g.x(i) + w * h;
                any = true;
                break;
            }
        }
    }
    if (!any) throw StationaryFront();

    // centered moving average over the smoothing window
    const int half = params.smooth_window / 2;
    std::vector<double> smooth(g.n_levels(), std::numeric_limits<double>::quiet_NaN());
    for (int m = 0; m <= g.n_steps; ++m) {
        double acc = 0.0;
        int cnt = 0;
        for (int q = std::max(0, m - half); q <= std::min(g.n_steps, m + half); ++q) {
            if (!std::isnan(s[q])) {
                acc += s[q];
                ++cnt;
            }
        }
        if (cnt > 0) smooth[m] = acc / cnt;
    }

    FrontFluxReport report;
    int stride = params.speed_stride;
    if (stride <= 0) {
        // span about 20 cells of front motion so the per-cell staircase of the
        // interpolated crossing averages out of the centered difference
        int first = 0, last = g.n_steps;
        while (first <= g.n_steps && std::isnan(s[first])) ++first;
        while (last >= 0 && std::isnan(s[last])) --last;
        const double travel = (first < last) ? std::abs(s[last] - s[first]) : 0.0;
        const double mean_speed = travel / std::max(1e-12, (last - first) * g.dt());
        stride = static_cast<int>(std::ceil(16.0 * h / std::max(1e-9, mean_speed * g.dt())));
        stride = std::clamp(stride, 1, std::max(1, g.n_steps / 8));
    }
    for (int m = stride; m + stride <= g.n_steps; ++m) {
        if (std::isnan(smooth[m - stride]) || std::isnan(smooth[m + stride]) ||
            std::isnan(s[m])) {
            continue;
        }
        const double speed = (smooth[m + stride] - smooth[m - stride]) / (2.0 * stride * g.dt());
        // one-sided slope fitted over the five nodes behind the crossing cell;
        // skips the freshly-melted node at the crossing and averages out the
        // per-cell sawtooth of the captured front
        const int cell = std::clamp(static_cast<int>(std::floor((s[m] - g.x_lo) / h)), 7,
                                    g.n_cells - 1);
        double x_mean = 0.0, u_mean = 0.0;
        for (int q = cell - 6; q <= cell - 2; ++q) {
            x_mean += g.x(q);
            u_mean += positive_part(u.at(m, q));
        }
        x_mean /= 5.0;
        u_mean /= 5.0;
        double cov = 0.0, var = 0.0;
        for (int q = cell - 6; q <= cell - 2; ++q) {
            cov += (g.x(q) - x_mean) * (positive_part(u.at(m, q)) - u_mean);
            var += (g.x(q) - x_mean) * (g.x(q) - x_mean);
        }
        const double grad = std::abs(cov / var);
        const double balance = W.latent_at(s[m]) * std::abs(speed);
        const double mism = std::abs(balance - grad) / std::max(grad, params.gradient_floor);
        report.levels.push_back(m);
        report.position.push_back(s[m]);
        report.speed.push_back(speed);
        report.gradient.push_back(grad);
        report.mismatch.push_back(mism);
    }
    if (report.levels.empty()) throw StationaryFront();
    return report;
}

}  // namespace stefanlab
