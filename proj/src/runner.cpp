#include "stefanlab/runner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>
#include <thread>

#include "stefanlab/benchmarks.hpp"
#include "stefanlab/csv.hpp"
#include "stefanlab/transforms.hpp"

namespace fs = std::filesystem;

namespace stefanlab {

namespace {

std::string eps_tag(int k) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%02d", k);
    return buf;
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    out << text;
}

// All files are produced under <out>.tmp and swapped in at the end.
class OutputDir {
public:
    explicit OutputDir(const std::string& target) : target_(target), tmp_(target + ".tmp") {
        fs::remove_all(tmp_);
        fs::create_directories(tmp_);
    }

    fs::path path(const std::string& name) const { return tmp_ / name; }

    void commit() {
        if (fs::exists(target_)) {
            const fs::path old = target_.string() + ".old";
            fs::remove_all(old);
            fs::rename(target_, old);
            fs::rename(tmp_, target_);
            fs::remove_all(old);
        } else {
            if (target_.has_parent_path()) fs::create_directories(target_.parent_path());
            fs::rename(tmp_, target_);
        }
        committed_ = true;
    }

    ~OutputDir() {
        if (!committed_) {
            std::error_code ec;
            fs::remove_all(tmp_, ec);
        }
    }

private:
    fs::path target_;
    fs::path tmp_;
    bool committed_ = false;
};

int resolve_parallelism(const Config& cfg) {
    if (const char* env = std::getenv("STEFANLAB_THREADS")) {
        try {
            const int v = std::stoi(env);
            if (v >= 1) return v;
        } catch (...) {
        }
    }
    if (cfg.parallelism > 0) return cfg.parallelism;
    const unsigned hw = std::thread::hardware_concurrency();
    return std::max(1u, std::min(hw, 8u));
}

SpaceTimeField clamp_positive(const SpaceTimeField& u) {
    SpaceTimeField out(u.grid());
    for (int m = 0; m <= u.grid().n_steps; ++m) {
        auto src = u.level(m);
        auto dst = out.level(m);
        for (std::size_t i = 0; i < src.size(); ++i) dst[i] = positive_part(src[i]);
    }
    return out;
}

SpaceTimeField apply_reaction(const SpaceTimeField& u, const NonlinearitySpec& f) {
    SpaceTimeField out(u.grid());
    for (int m = 0; m <= u.grid().n_steps; ++m) {
        auto src = u.level(m);
        auto dst = out.level(m);
        for (std::size_t i = 0; i < src.size(); ++i) dst[i] = f.eval(src[i]);
    }
    return out;
}

}  // namespace

SweepArtifacts analyze_sweep(const Config& cfg, SweepReport&& report) {
    SweepArtifacts art{std::move(report), {}, {}, {}, {}, {}, 0.0};
    const SweepReport& rep = art.report;
    const int k_count = rep.size();
    const double eps_star = rep.epsilons.back();
    const double delta_star = cfg.delta_for(eps_star);
    const SolverRun& finest = rep.finest();
    const ProblemSpec base = cfg.make_problem(eps_star);

    art.fb = extract_waiting_time(finest.u, delta_star, eps_star);
    art.latent = compute_W(base.u0, apply_reaction(finest.u, cfg.f), art.fb);

    art.weak_residuals.resize(k_count);
    art.violations.resize(k_count);
    art.ode.resize(k_count);
    const WindowIndices wi = window_indices(cfg.grid, cfg.window);
    for (int k = 0; k < k_count; ++k) {
        const double delta_k = cfg.delta_for(rep.epsilons[k]);
        art.weak_residuals[k] = stefan_weak_residual(clamp_positive(rep.runs[k].u), art.latent,
                                                     cfg.f, rep.dictionary, delta_k);
        art.violations[k] = monotonicity_violations(rep.runs[k].u, delta_k);
        art.ode[k] = negative_ode_residual_clean(rep.runs[k].u, cfg.f, wi.level_lo, wi.level_hi,
                                                 delta_k, cfg.thresholds.ode_buffer_cells,
                                                 cfg.window);
    }

    art.wlimit_residual = w_limit_equation_residual(make_transformed(finest, base, 0), art.latent,
                                                    art.fb, cfg.f);
    return art;
}

SweepArtifacts build_sweep_artifacts(const Config& cfg) {
    EpsilonSweep sweep;
    sweep.base = cfg.make_problem(cfg.epsilon_list.front());
    sweep.epsilons = cfg.epsilon_list;
    sweep.window = cfg.window;
    sweep.newton = cfg.newton;
    sweep.parallelism = resolve_parallelism(cfg);
    return analyze_sweep(cfg, run_sweep(sweep));
}

VerifyOutcome evaluate_theorem_clauses(const Config& cfg, const SweepArtifacts& art) {
    const SweepReport& report = art.report;
    const Thresholds& th = cfg.thresholds;
    const int k_count = report.size();
    const int n_eta = static_cast<int>(report.dictionary.size());
    const double dt = cfg.grid.dt();
    const double h = cfg.grid.h();
    const double eps_star = report.epsilons.back();
    VerifyOutcome out;

    {  // (i) uniform convergence of u+ and weak-* stabilization of u-
        ClauseVerdict v;
        v.clause = "(i)";
        const CauchyVerdict cauchy = positive_part_cauchy(report, th.cauchy_final);
        const double pairing = weak_star_stabilization(report);
        v.value = cauchy.final_value;
        v.threshold = th.cauchy_final;
        v.pass = cauchy.pass && pairing <= th.pairing_delta;
        std::ostringstream d;
        d << "cauchy_final=" << format_double(cauchy.final_value)
          << " tail_decreasing=" << (cauchy.tail_decreasing ? "yes" : "no")
          << " pairing_delta=" << format_double(pairing) << " (<= "
          << format_double(th.pairing_delta) << ")";
        v.detail = d.str();
        out.clauses.push_back(std::move(v));
    }

    {  // (ii) monotone positivity sets
        ClauseVerdict v;
        v.clause = "(ii)";
        bool non_increasing = true;
        for (int k = 0; k + 1 < k_count; ++k) {
            if (art.violations[k + 1] > art.violations[k]) non_increasing = false;
        }
        v.value = static_cast<double>(art.violations.back());
        v.threshold = 0.0;
        v.pass = non_increasing && art.violations.back() == 0;
        std::ostringstream d;
        d << "violations per eps:";
        for (long c : art.violations) d << " " << c;
        v.detail = d.str();
        out.clauses.push_back(std::move(v));
    }

    {  // (iii) frozen-region ODE
        ClauseVerdict v;
        v.clause = "(iii)";
        const OdeCleanResult& ode = art.ode.back();
        v.threshold = th.ode_factor * (eps_star + dt);
        v.value = ode.max_residual;
        if (ode.node_count == 0) {
            v.applicable = false;
            v.detail = "no never-positive nodes in the window";
        } else {
            v.pass = ode.max_residual <= v.threshold;
            std::ostringstream d;
            d << "nodes=" << ode.node_count << " max_residual=" << format_double(ode.max_residual);
            v.detail = d.str();
        }
        out.clauses.push_back(std::move(v));
    }

    {  // (iv) weak solution of the limiting problem
        ClauseVerdict v;
        v.clause = "(iv)";
        // monotonicity is gated on the dictionary sup; individual pairings
        // jostle at the quadrature floor and where the coarse-eps delta rule
        // degenerates
        bool decreasing = true;
        std::vector<double> sup_per_eps(k_count, 0.0);
        for (int k = 0; k < k_count; ++k) {
            for (int j = 0; j < n_eta; ++j) {
                sup_per_eps[k] = std::max(sup_per_eps[k], art.weak_residuals[k][j]);
            }
        }
        for (int k = 0; k + 1 < k_count; ++k) {
            if (sup_per_eps[k + 1] > sup_per_eps[k] * (1.0 + th.weak_decrease_slack) + 1e-12) {
                decreasing = false;
            }
        }
        const double finest_max = sup_per_eps[k_count - 1];
        v.value = finest_max;
        v.threshold = th.weak_residual_max;
        v.pass = decreasing && finest_max <= th.weak_residual_max &&
                 art.wlimit_residual <= th.wlimit_max;
        std::ostringstream d;
        d << "decreasing=" << (decreasing ? "yes" : "no")
          << " wlimit_residual=" << format_double(art.wlimit_residual) << " (<= "
          << format_double(th.wlimit_max) << ")";
        v.detail = d.str();
        out.clauses.push_back(std::move(v));
    }

    {  // (v) strong gradient convergence
        ClauseVerdict v;
        v.clause = "(v)";
        double identity_max = 0.0;
        for (int k = 0; k < k_count; ++k) {
            for (int j = 0; j < n_eta; ++j) {
                identity_max = std::max(identity_max, report.identity_residual_table[k][j]);
            }
        }
        bool dist_decreasing = true;
        for (int j = 0; j < n_eta; ++j) {
            for (int k = 0; k + 2 < k_count; ++k) {
                const double a = report.grad_dist_table[k][j];
                const double b = report.grad_dist_table[k + 1][j];
                // exact zeros mean the test function never meets the positive
                // phase; treat a zero tail as converged
                if (!(b < a || (a == 0.0 && b == 0.0))) dist_decreasing = false;
            }
        }
        v.value = identity_max;
        v.threshold = th.identity_c * (dt + h * h);
        v.pass = identity_max <= v.threshold && dist_decreasing;
        std::ostringstream d;
        d << "grad_dist_decreasing=" << (dist_decreasing ? "yes" : "no");
        v.detail = d.str();
        out.clauses.push_back(std::move(v));
    }

    return out;
}

namespace {

using ManifestExtras = std::vector<std::pair<std::string, std::string>>;

void append_newton_stats(ManifestExtras& extras, const NewtonStats& stats) {
    extras.emplace_back("newton_max_iterations_per_step",
                        std::to_string(stats.max_iterations_per_step));
    extras.emplace_back("newton_total_iterations", std::to_string(stats.total_iterations));
    extras.emplace_back("newton_worst_residual", format_double(stats.worst_residual));
}

NewtonStats aggregate_stats(const SweepReport& report) {
    NewtonStats total;
    for (const SolverRun& run : report.runs) {
        total.max_iterations_per_step =
            std::max(total.max_iterations_per_step, run.stats.max_iterations_per_step);
        total.total_iterations += run.stats.total_iterations;
        total.worst_residual = std::max(total.worst_residual, run.stats.worst_residual);
    }
    return total;
}

void write_sweep_outputs(const Config& cfg, const SweepArtifacts& art, OutputDir& dir) {
    const SweepReport& report = art.report;
    const int k_count = report.size();
    const int n_eta = static_cast<int>(report.dictionary.size());

    for (int k = 0; k < k_count; ++k) {
        write_field_csv(dir.path("u_eps" + eps_tag(k) + ".csv").string(), report.runs[k].u);
    }

    {
        std::vector<std::vector<double>> rows;
        for (int k = 0; k + 1 < k_count; ++k) {
            rows.push_back({report.epsilons[k], report.epsilons[k + 1], report.cauchy_sup[k]});
        }
        write_table_csv(dir.path("cauchy.csv").string(), {"eps_coarse", "eps_fine", "cauchy_sup"},
                        rows);
    }

    auto eta_header = [&](const std::string& first) {
        std::vector<std::string> header{first};
        for (int j = 0; j < n_eta; ++j) header.push_back("eta" + std::to_string(j));
        return header;
    };
    auto write_per_eta = [&](const std::string& name,
                             const std::vector<std::vector<double>>& table, int row_count) {
        std::vector<std::vector<double>> rows;
        for (int k = 0; k < row_count; ++k) {
            std::vector<double> row{report.epsilons[k]};
            row.insert(row.end(), table[k].begin(), table[k].end());
            rows.push_back(std::move(row));
        }
        write_table_csv(dir.path(name).string(), eta_header("eps"), rows);
    };
    write_per_eta("pairings.csv", report.pairing_table, k_count);
    write_per_eta("grad_l2.csv", report.grad_l2_table, k_count);
    write_per_eta("identity_residual.csv", report.identity_residual_table, k_count);
    write_per_eta("grad_dist.csv", report.grad_dist_table, k_count - 1);
    write_per_eta("weak_residuals.csv", art.weak_residuals, k_count);

    {
        std::vector<std::vector<double>> rows;
        for (int k = 0; k < k_count; ++k) {
            rows.push_back({report.epsilons[k], cfg.delta_for(report.epsilons[k]),
                            static_cast<double>(art.violations[k]), art.ode[k].max_residual,
                            static_cast<double>(art.ode[k].node_count)});
        }
        write_table_csv(dir.path("frozen_phase.csv").string(),
                        {"eps", "delta", "violations", "ode_residual", "ode_nodes"}, rows);
    }

    {
        const Grid1D& g = cfg.grid;
        std::vector<std::vector<double>> rows;
        for (int i = 0; i <= g.n_cells; ++i) {
            rows.push_back({g.x(i), art.fb.waiting_time[i], art.latent.w_raw[i],
                            art.latent.latent(i),
                            static_cast<double>(art.latent.never_flag[i])});
        }
        write_table_csv(dir.path("waiting_time.csv").string(),
                        {"x", "T", "W_raw", "W", "never"}, rows);
    }
}

int cmd_solve(const Config& cfg, OutputDir& dir, std::ostream& log,
              ManifestExtras& extras) {
    const ProblemSpec spec = cfg.make_problem(cfg.epsilon);
    const SolverRun run = solve(spec, cfg.newton);
    append_newton_stats(extras, run.stats);
    write_field_csv(dir.path("u.csv").string(), run.u);
    write_field_csv(dir.path("v.csv").string(), run.v);
    if (cfg.export_transforms) {
        TransformedRun tr = make_transformed(run, spec, 0);
        write_field_csv(dir.path("w.csv").string(), tr.w);
        write_field_csv(dir.path("g.csv").string(), tr.g);
    }
    if (!cfg.quiet) {
        log << "solve: " << cfg.grid.n_cells << " cells, " << cfg.grid.n_steps
            << " steps, eps = " << cfg.epsilon
            << ", newton max iters/step = " << run.stats.max_iterations_per_step << "\n";
    }
    return 0;
}

int cmd_sweep(const Config& cfg, OutputDir& dir, std::ostream& log,
              ManifestExtras& extras) {
    const SweepArtifacts art = build_sweep_artifacts(cfg);
    append_newton_stats(extras, aggregate_stats(art.report));
    write_sweep_outputs(cfg, art, dir);
    if (!cfg.quiet) {
        log << "sweep: " << art.report.size() << " runs, finest eps = "
            << art.report.epsilons.back() << "\n";
    }
    return 0;
}

int cmd_verify(const Config& cfg, OutputDir& dir, std::ostream& log,
               ManifestExtras& extras) {
    const SweepArtifacts art = build_sweep_artifacts(cfg);
    append_newton_stats(extras, aggregate_stats(art.report));
    write_sweep_outputs(cfg, art, dir);
    const VerifyOutcome outcome = evaluate_theorem_clauses(cfg, art);
    const std::string verdict = render_verdict(outcome);
    write_text(dir.path("verdict.txt"), verdict);
    if (!cfg.quiet) log << verdict;
    return outcome.all_pass() ? 0 : 1;
}

int cmd_benchmark(const Config& cfg, OutputDir& dir, std::ostream& log,
                  ManifestExtras& extras) {
    switch (cfg.benchmark) {
        case BenchmarkKind::neumann: {
            const NeumannSolution sol = NeumannSolution::make(cfg.preset_opt.u_b,
                                                              cfg.preset_opt.w0);
            Config bench_cfg = cfg;
            bench_cfg.preset = PresetKind::neumann;
            const ProblemSpec spec = bench_cfg.make_problem(cfg.epsilon);
            const SolverRun run = solve(spec, cfg.newton);
            append_newton_stats(extras, run.stats);
            write_field_csv(dir.path("u.csv").string(), run.u);

            // exact solution sampled on the same lattice (physical time t0 + t)
            SpaceTimeField exact(cfg.grid);
            for (int m = 0; m <= cfg.grid.n_steps; ++m) {
                const double t_phys = cfg.preset_opt.t0 + cfg.grid.t(m);
                auto row = exact.level(m);
                for (int i = 0; i <= cfg.grid.n_cells; ++i) {
                    const double x = cfg.grid.x(i);
                    row[i] = x < sol.front(t_phys) ? sol.eval(x, t_phys) : -cfg.preset_opt.w0;
                }
            }
            write_field_csv(dir.path("u_exact.csv").string(), exact);

            const double delta = cfg.delta_for(cfg.epsilon);
            const FreeBoundary fb = extract_waiting_time(run.u, delta, cfg.epsilon);
            const LatentHeatField latent =
                compute_W(spec.u0, apply_reaction(run.u, cfg.f), fb);
            const FrontFluxReport flux = front_flux_check(run.u, fb, latent);

            double front_err = 0.0;
            std::vector<std::vector<double>> rows;
            for (std::size_t k = 0; k < flux.levels.size(); ++k) {
                const int m = flux.levels[k];
                const double t_phys = cfg.preset_opt.t0 + cfg.grid.t(m);
                const double s_exact = sol.front(t_phys);
                front_err = std::max(front_err, std::abs(flux.position[k] - s_exact));
                rows.push_back({cfg.grid.t(m), flux.position[k], s_exact, flux.speed[k],
                                flux.gradient[k], flux.mismatch[k]});
            }
            write_table_csv(dir.path("front.csv").string(),
                            {"t", "s_numeric", "s_exact", "speed", "gradient", "flux_mismatch"},
                            rows);

            const double front_tol = std::max(cfg.thresholds.front_tol_abs,
                                              3.0 * cfg.grid.h() + 2.0 * std::sqrt(cfg.epsilon));
            const double mid_mismatch =
                flux.max_mismatch_mid(cfg.grid, 0.35, 0.65);
            const bool pass = front_err <= front_tol &&
                              mid_mismatch <= cfg.thresholds.front_flux_max;
            std::ostringstream rep;
            rep << "neumann benchmark\n"
                << "lambda = " << format_double(sol.lambda) << "\n"
                << "front_error_max = " << format_double(front_err) << " (<= "
                << format_double(front_tol) << ")\n"
                << "flux_mismatch_mid = " << format_double(mid_mismatch) << " (<= "
                << format_double(cfg.thresholds.front_flux_max) << ")\n"
                << "verdict = " << (pass ? "PASS" : "FAIL") << "\n";
            write_text(dir.path("report.txt"), rep.str());
            if (!cfg.quiet) log << rep.str();
            return pass ? 0 : 1;
        }
        case BenchmarkKind::planar_wave: {
            const PlanarWave pw{1.0, 1.0};
            const SpaceTimeField sampled = sample_planar_wave(pw, cfg.grid);
            write_field_csv(dir.path("u_exact.csv").string(), sampled);
            // closed-form heat residual at interior support points
            double heat_residual = 0.0;
            int samples = 0;
            for (int m = 1; m < cfg.grid.n_steps && samples < 100; ++m) {
                for (int i = 1; i < cfg.grid.n_cells && samples < 100; ++i) {
                    const double x = cfg.grid.x(i);
                    const double t = cfg.grid.t(m);
                    if (pw.eval(x, t) <= 0.0) continue;
                    heat_residual =
                        std::max(heat_residual, std::abs(pw.dt_(x, t) - pw.dxx(x, t)));
                    ++samples;
                }
            }
            const bool pass = heat_residual <= 1e-12;
            std::ostringstream rep;
            rep << "planar wave benchmark\n"
                << "heat_residual_max = " << format_double(heat_residual) << " (<= 1e-12)\n"
                << "verdict = " << (pass ? "PASS" : "FAIL") << "\n";
            write_text(dir.path("report.txt"), rep.str());
            if (!cfg.quiet) log << rep.str();
            return pass ? 0 : 1;
        }
        case BenchmarkKind::linear_heat: {
            ScalarField phi = ScalarField::sample(cfg.grid, [&](double x) {
                return -std::max(0.0, 1.0 - std::abs(x) / cfg.preset_opt.tent_half_width);
            });
            const std::vector<double> eps_list{1e-1, 1e-2, 1e-3, 1e-4};
            const std::vector<double> dist = linear_heat_viscosity_sweep(
                phi, eps_list, cfg.window, cfg.grid.t_end, cfg.grid.n_steps);
            std::vector<std::vector<double>> rows;
            bool decreasing = true;
            for (std::size_t k = 0; k < eps_list.size(); ++k) {
                rows.push_back({eps_list[k], dist[k]});
                if (k > 0 && !(dist[k] < dist[k - 1])) decreasing = false;
            }
            write_table_csv(dir.path("linear_heat.csv").string(), {"eps", "sup_distance"}, rows);
            const bool pass = decreasing && dist.back() <= 0.05;
            std::ostringstream rep;
            rep << "linear heat vanishing-viscosity benchmark\n"
                << "final_distance = " << format_double(dist.back()) << " (<= 0.05)\n"
                << "strictly_decreasing = " << (decreasing ? "yes" : "no") << "\n"
                << "verdict = " << (pass ? "PASS" : "FAIL") << "\n";
            write_text(dir.path("report.txt"), rep.str());
            if (!cfg.quiet) log << rep.str();
            return pass ? 0 : 1;
        }
    }
    return 2;
}

}  // namespace

bool VerifyOutcome::all_pass() const {
    return std::all_of(clauses.begin(), clauses.end(),
                       [](const ClauseVerdict& c) { return c.ok(); });
}

std::string render_verdict(const VerifyOutcome& outcome) {
    std::ostringstream out;
    for (const ClauseVerdict& c : outcome.clauses) {
        out << "CLAUSE " << c.clause << ": "
            << (!c.applicable ? "N/A" : c.pass ? "PASS" : "FAIL") << " "
            << format_double(c.value) << " " << format_double(c.threshold) << "\n";
    }
    out << "\n";
    for (const ClauseVerdict& c : outcome.clauses) {
        out << "# " << c.clause << " " << c.detail << "\n";
    }
    return out.str();
}

int run(const Config& cfg, std::ostream& log) {
    const auto start = std::chrono::steady_clock::now();
    try {
        OutputDir dir(cfg.out_dir);
        ManifestExtras extras;
        int code = 0;
        switch (cfg.command) {
            case Command::solve:
                code = cmd_solve(cfg, dir, log, extras);
                break;
            case Command::sweep:
                code = cmd_sweep(cfg, dir, log, extras);
                break;
            case Command::verify:
                code = cmd_verify(cfg, dir, log, extras);
                break;
            case Command::benchmark:
                code = cmd_benchmark(cfg, dir, log, extras);
                break;
        }
        const double wall =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        write_text(dir.path("manifest.txt"), render_manifest(cfg, wall, extras));
        dir.commit();
        return code;
    } catch (const SolverError& e) {
        log << "solver error: " << e.what() << "\n";
        return 3;
    } catch (const StationaryFront& e) {
        log << "solver error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        log << "error: " << e.what() << "\n";
        return 2;
    }
}

}  // namespace stefanlab
