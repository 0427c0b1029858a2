#include "stefanlab/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <sstream>

#include "stefanlab/csv.hpp"

namespace stefanlab {

const char* const kArtifactVersion = "0.1.0";

namespace {

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    std::size_t b = s.find_last_not_of(" \t\r");
    if (a == std::string::npos) return "";
    return s.substr(a, b - a + 1);
}

struct RawEntry {
    std::string section;
    std::string key;
    std::string value;
    int line;
};

struct Parser {
    std::vector<RawEntry> entries;
    std::vector<std::string> errors;

    void fail(const std::string& msg) { errors.push_back(msg); }

    RawEntry* find(const std::string& section, const std::string& key) {
        for (auto& e : entries) {
            if (e.section == section && e.key == key) return &e;
        }
        return nullptr;
    }

    bool has(const std::string& section, const std::string& key) {
        return find(section, key) != nullptr;
    }

    std::string get_string(const std::string& section, const std::string& key,
                           const std::string& fallback) {
        RawEntry* e = find(section, key);
        return e ? e->value : fallback;
    }

    double get_double(const std::string& section, const std::string& key, double fallback) {
        RawEntry* e = find(section, key);
        if (!e) return fallback;
        try {
            std::size_t pos = 0;
            const double v = std::stod(e->value, &pos);
            if (pos != e->value.size()) throw std::invalid_argument("");
            return v;
        } catch (...) {
            fail(key + ": not a number ('" + e->value + "', line " + std::to_string(e->line) + ")");
            return fallback;
        }
    }

    int get_int(const std::string& section, const std::string& key, int fallback) {
        RawEntry* e = find(section, key);
        if (!e) return fallback;
        try {
            std::size_t pos = 0;
            const int v = std::stoi(e->value, &pos);
            if (pos != e->value.size()) throw std::invalid_argument("");
            return v;
        } catch (...) {
            fail(key + ": not an integer ('" + e->value + "', line " + std::to_string(e->line) +
                 ")");
            return fallback;
        }
    }

    bool get_bool(const std::string& section, const std::string& key, bool fallback) {
        RawEntry* e = find(section, key);
        if (!e) return fallback;
        if (e->value == "true" || e->value == "1") return true;
        if (e->value == "false" || e->value == "0") return false;
        fail(key + ": expected true/false (line " + std::to_string(e->line) + ")");
        return fallback;
    }

    std::vector<double> get_double_list(const std::string& section, const std::string& key) {
        RawEntry* e = find(section, key);
        std::vector<double> out;
        if (!e) return out;
        std::istringstream ss(e->value);
        std::string tok;
        while (ss >> tok) {
            try {
                out.push_back(std::stod(tok));
            } catch (...) {
                fail(key + ": bad number '" + tok + "' (line " + std::to_string(e->line) + ")");
            }
        }
        return out;
    }

    // "a:b c:d" pair list
    std::vector<std::pair<double, double>> get_pair_list(const std::string& section,
                                                         const std::string& key) {
        RawEntry* e = find(section, key);
        std::vector<std::pair<double, double>> out;
        if (!e) return out;
        std::istringstream ss(e->value);
        std::string tok;
        while (ss >> tok) {
            const std::size_t colon = tok.find(':');
            if (colon == std::string::npos) {
                fail(key + ": expected 'a:b' pairs (line " + std::to_string(e->line) + ")");
                continue;
            }
            try {
                out.emplace_back(std::stod(tok.substr(0, colon)), std::stod(tok.substr(colon + 1)));
            } catch (...) {
                fail(key + ": bad pair '" + tok + "' (line " + std::to_string(e->line) + ")");
            }
        }
        return out;
    }
};

const std::map<std::string, std::vector<std::string>> kKnownKeys = {
    {"run", {"command", "out_dir", "parallelism", "quiet"}},
    {"grid", {"x_lo", "x_hi", "n_cells", "t_end", "n_steps"}},
    {"problem",
     {"preset", "constant_value", "melt_ramp_start", "melt_ramp_width", "step_half_width",
      "tent_half_width", "u_b", "w0", "t0", "custom_csv", "epsilon", "epsilon_list", "f", "f_c",
      "f_a", "f_lambda", "f_breakpoints", "lambda", "bc_left", "bc_left_value", "bc_left_trace",
      "bc_right", "bc_right_value", "bc_right_trace", "benchmark", "export_transforms",
      "newton_tol", "newton_max_iter"}},
    {"window", {"x_lo", "x_hi", "t_lo", "t_hi"}},
    {"thresholds",
     {"delta_scale", "delta_floor", "cauchy_final", "pairing_delta", "ode_factor",
      "ode_buffer_cells", "weak_residual_max", "weak_decrease_slack", "identity_c", "wlimit_max",
      "front_tol_abs", "front_flux_max"}},
    {"manifest", {}},  // accepted, never interpreted
};

std::optional<EndpointBc> parse_endpoint(Parser& p, const std::string& side) {
    const std::string kind = p.get_string("problem", "bc_" + side, "");
    auto trace_pairs = p.get_pair_list("problem", "bc_" + side + "_trace");
    const bool has_value = p.has("problem", "bc_" + side + "_value");
    const double value = p.get_double("problem", "bc_" + side + "_value", 0.0);
    if (kind.empty()) {
        if (has_value || !trace_pairs.empty()) {
            p.fail("bc_" + side + "_value/trace given but bc_" + side + " is not set");
        }
        return std::nullopt;
    }
    if (kind == "neumann") return EndpointBc::neumann_zero();
    if (kind != "dirichlet") {
        p.fail("bc_" + side + ": expected 'neumann' or 'dirichlet', got '" + kind + "'");
        return std::nullopt;
    }
    try {
        if (!trace_pairs.empty()) {
            BoundaryTrace trace;
            trace.knots = std::move(trace_pairs);
            return EndpointBc::dirichlet(std::move(trace));
        }
        if (!has_value) {
            p.fail("bc_" + side + " = dirichlet needs bc_" + side + "_value or bc_" + side +
                   "_trace");
            return std::nullopt;
        }
        return EndpointBc::dirichlet_constant(value);
    } catch (const std::exception& e) {
        p.fail("bc_" + side + ": " + e.what());
        return std::nullopt;
    }
}

}  // namespace

ProblemSpec Config::make_problem(double eps_value) const {
    ScalarField u0 = preset == PresetKind::custom ? read_initial_csv(custom_csv, grid)
                                                  : preset_initial_data(preset, grid, preset_opt);
    BoundarySpec bc = preset_boundary(preset, preset_opt);
    if (bc_left) bc.left = *bc_left;
    if (bc_right) bc.right = *bc_right;
    const double lam = lambda > 0.0 ? lambda : preset_lambda(preset, u0);
    return ProblemSpec::make(grid, Epsilon(eps_value), f, std::move(u0), bc, lam);
}

double Config::delta_for(double eps_value) const {
    return delta_rule(eps_value, thresholds.delta_scale, thresholds.delta_floor);
}

ParseResult parse_config(const std::string& text) {
    Parser p;
    {
        std::istringstream in(text);
        std::string line;
        std::string section;
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            const std::string s = trim(line);
            if (s.empty() || s[0] == '#' || s[0] == ';') continue;
            if (s.front() == '[') {
                if (s.back() != ']') {
                    p.fail("line " + std::to_string(lineno) + ": malformed section header");
                    continue;
                }
                section = trim(s.substr(1, s.size() - 2));
                if (!kKnownKeys.count(section)) {
                    p.fail("line " + std::to_string(lineno) + ": unknown section [" + section +
                           "]");
                    section.clear();
                }
                continue;
            }
            const std::size_t eq = s.find('=');
            if (eq == std::string::npos) {
                p.fail("line " + std::to_string(lineno) + ": expected 'key = value'");
                continue;
            }
            if (section.empty()) {
                p.fail("line " + std::to_string(lineno) + ": key outside any section");
                continue;
            }
            RawEntry e;
            e.section = section;
            e.key = trim(s.substr(0, eq));
            e.value = trim(s.substr(eq + 1));
            e.line = lineno;
            p.entries.push_back(std::move(e));
        }
    }

    // reject unknown keys (the [manifest] section accepts anything)
    for (const auto& e : p.entries) {
        if (e.section == "manifest") continue;
        const auto it = kKnownKeys.find(e.section);
        if (it == kKnownKeys.end()) continue;  // already reported
        if (std::find(it->second.begin(), it->second.end(), e.key) == it->second.end()) {
            p.fail("unknown key '" + e.key + "' in section [" + e.section + "] (line " +
                   std::to_string(e.line) + ")");
        }
    }

    Config cfg;

    const std::string cmd = p.get_string("run", "command", "");
    if (cmd == "solve") cfg.command = Command::solve;
    else if (cmd == "sweep") cfg.command = Command::sweep;
    else if (cmd == "verify") cfg.command = Command::verify;
    else if (cmd == "benchmark") cfg.command = Command::benchmark;
    else if (cmd.empty()) p.fail("command: required (solve | sweep | verify | benchmark)");
    else p.fail("command: unknown '" + cmd + "' (solve | sweep | verify | benchmark)");

    cfg.out_dir = p.get_string("run", "out_dir", "out");
    cfg.parallelism = p.get_int("run", "parallelism", 0);
    if (cfg.parallelism < 0) p.fail("parallelism: must be >= 0");
    cfg.quiet = p.get_bool("run", "quiet", false);

    const std::string preset_str = p.get_string("problem", "preset", "constant");
    try {
        cfg.preset = preset_from_name(preset_str);
    } catch (const std::exception& e) {
        p.fail(std::string("preset: ") + e.what());
    }
    cfg.preset_opt.constant_value = p.get_double("problem", "constant_value", 0.5);
    cfg.preset_opt.melt_ramp_start = p.get_double("problem", "melt_ramp_start", -0.5);
    cfg.preset_opt.melt_ramp_width = p.get_double("problem", "melt_ramp_width", 0.4);
    cfg.preset_opt.step_half_width = p.get_double("problem", "step_half_width", 0.1);
    cfg.preset_opt.tent_half_width = p.get_double("problem", "tent_half_width", 0.5);
    cfg.preset_opt.u_b = p.get_double("problem", "u_b", 1.0);
    cfg.preset_opt.w0 = p.get_double("problem", "w0", 1.0);
    cfg.preset_opt.t0 = p.get_double("problem", "t0", 0.1);
    cfg.custom_csv = p.get_string("problem", "custom_csv", "");
    if (cfg.preset == PresetKind::custom && cfg.custom_csv.empty()) {
        p.fail("custom_csv: required for preset = custom");
    }

    const std::string bench = p.get_string("problem", "benchmark", "neumann");
    if (bench == "neumann") cfg.benchmark = BenchmarkKind::neumann;
    else if (bench == "planar_wave") cfg.benchmark = BenchmarkKind::planar_wave;
    else if (bench == "linear_heat") cfg.benchmark = BenchmarkKind::linear_heat;
    else p.fail("benchmark: unknown '" + bench + "' (neumann | planar_wave | linear_heat)");

    // grid: preset defaults unless overridden; the neumann benchmark carries
    // its own half-line domain
    PresetKind grid_preset = cfg.preset;
    if (cfg.command == Command::benchmark && cfg.benchmark == BenchmarkKind::neumann) {
        grid_preset = PresetKind::neumann;
    }
    Grid1D def = Grid1D::make(-1.0, 1.0, 400, 1.0, 4000);
    try {
        def = preset_default_grid(grid_preset);
    } catch (...) {
    }
    cfg.grid_explicit = p.has("grid", "x_lo") || p.has("grid", "x_hi") ||
                        p.has("grid", "n_cells") || p.has("grid", "t_end") ||
                        p.has("grid", "n_steps");
    const double gx_lo = p.get_double("grid", "x_lo", def.x_lo);
    const double gx_hi = p.get_double("grid", "x_hi", def.x_hi);
    const int gn_cells = p.get_int("grid", "n_cells", def.n_cells);
    const double gt_end = p.get_double("grid", "t_end", def.t_end);
    const int gn_steps = p.get_int("grid", "n_steps", def.n_steps);
    if (gn_cells < 8) p.fail("n_cells: must be >= 8 (got " + std::to_string(gn_cells) + ")");
    if (gn_steps < 1) p.fail("n_steps: must be >= 1 (got " + std::to_string(gn_steps) + ")");
    if (!(gt_end > 0.0)) p.fail("t_end: must be > 0");
    if (!(gx_hi > gx_lo)) p.fail("x_hi: must exceed x_lo");
    if (p.errors.empty()) {
        cfg.grid = Grid1D::make(gx_lo, gx_hi, gn_cells, gt_end, gn_steps);
    }

    const double eps = p.get_double("problem", "epsilon", 0.01);
    if (!(eps > 0.0 && eps <= 1.0)) {
        p.fail("epsilon: must lie in (0, 1], got " + format_double(eps));
    } else {
        cfg.epsilon = eps;
    }
    cfg.epsilon_list = p.get_double_list("problem", "epsilon_list");
    if (cfg.epsilon_list.empty()) {
        cfg.epsilon_list = default_epsilon_list();
    } else {
        for (std::size_t k = 0; k < cfg.epsilon_list.size(); ++k) {
            if (!(cfg.epsilon_list[k] > 0.0 && cfg.epsilon_list[k] <= 1.0)) {
                p.fail("epsilon_list: entries must lie in (0, 1]");
                break;
            }
            if (k > 0 && !(cfg.epsilon_list[k] < cfg.epsilon_list[k - 1])) {
                p.fail("epsilon_list: must be strictly decreasing (sweep invariant)");
                break;
            }
        }
        if ((cfg.command == Command::sweep || cfg.command == Command::verify) &&
            cfg.epsilon_list.size() < 3) {
            p.fail("epsilon_list: a sweep needs at least 3 entries");
        }
    }

    const std::string f_kind = p.get_string("problem", "f", "zero");
    const double f_c = p.get_double("problem", "f_c", 1.0);
    const double f_a = p.get_double("problem", "f_a", 1.0);
    const double f_lambda = p.get_double("problem", "f_lambda", 1.0);
    try {
        if (f_kind == "zero") cfg.f = NonlinearitySpec::zero();
        else if (f_kind == "linear_decay") cfg.f = NonlinearitySpec::linear_decay(f_c);
        else if (f_kind == "logistic") cfg.f = NonlinearitySpec::logistic(f_a, f_lambda);
        else if (f_kind == "piecewise_linear") {
            auto pairs = p.get_pair_list("problem", "f_breakpoints");
            std::vector<Breakpoint> pts;
            for (auto& [u, fv] : pairs) pts.push_back({u, fv});
            cfg.f = NonlinearitySpec::piecewise_linear(std::move(pts));
        } else {
            p.fail("f: unknown kind '" + f_kind +
                   "' (zero | linear_decay | logistic | piecewise_linear)");
        }
    } catch (const std::exception& e) {
        p.fail(std::string("f: ") + e.what());
    }

    cfg.lambda = p.get_double("problem", "lambda", 0.0);
    if (cfg.lambda < 0.0) p.fail("lambda: must be >= 0 (0 = derive from preset)");

    cfg.bc_left = parse_endpoint(p, "left");
    cfg.bc_right = parse_endpoint(p, "right");

    cfg.export_transforms = p.get_bool("problem", "export_transforms", false);
    cfg.newton.tol = p.get_double("problem", "newton_tol", 1e-11);
    cfg.newton.max_iter = p.get_int("problem", "newton_max_iter", 50);
    if (!(cfg.newton.tol > 0.0)) p.fail("newton_tol: must be > 0");
    if (cfg.newton.max_iter < 1) p.fail("newton_max_iter: must be >= 1");

    cfg.window.x_lo = p.get_double("window", "x_lo", 0.0);
    cfg.window.x_hi = p.get_double("window", "x_hi", 0.0);
    cfg.window.t_lo = p.get_double("window", "t_lo", 0.0);
    cfg.window.t_hi = p.get_double("window", "t_hi", 0.0);
    if (!p.has("window", "x_lo") && !p.has("window", "x_hi")) {
        // default window: central 75% in space, [0.1, 0.9] of the horizon
        const double mid = 0.5 * (gx_lo + gx_hi);
        const double half = 0.375 * (gx_hi - gx_lo);
        cfg.window.x_lo = mid - half;
        cfg.window.x_hi = mid + half;
    }
    if (!p.has("window", "t_lo") && !p.has("window", "t_hi")) {
        cfg.window.t_lo = 0.1 * gt_end;
        cfg.window.t_hi = 0.9 * gt_end;
    }
    if (!(cfg.window.x_lo < cfg.window.x_hi) || cfg.window.x_lo <= gx_lo ||
        cfg.window.x_hi >= gx_hi) {
        p.fail("window x range must be strictly inside the grid");
    }
    if (!(cfg.window.t_lo < cfg.window.t_hi) || cfg.window.t_lo <= 0.0 ||
        cfg.window.t_hi >= gt_end) {
        p.fail("window t range must be strictly inside (0, t_end)");
    }

    Thresholds& th = cfg.thresholds;
    th.delta_scale = p.get_double("thresholds", "delta_scale", th.delta_scale);
    th.delta_floor = p.get_double("thresholds", "delta_floor", th.delta_floor);
    th.cauchy_final = p.get_double("thresholds", "cauchy_final", th.cauchy_final);
    th.pairing_delta = p.get_double("thresholds", "pairing_delta", th.pairing_delta);
    th.ode_factor = p.get_double("thresholds", "ode_factor", th.ode_factor);
    th.ode_buffer_cells = p.get_int("thresholds", "ode_buffer_cells", th.ode_buffer_cells);
    th.weak_residual_max = p.get_double("thresholds", "weak_residual_max", th.weak_residual_max);
    th.weak_decrease_slack =
        p.get_double("thresholds", "weak_decrease_slack", th.weak_decrease_slack);
    th.identity_c = p.get_double("thresholds", "identity_c", th.identity_c);
    th.wlimit_max = p.get_double("thresholds", "wlimit_max", th.wlimit_max);
    th.front_tol_abs = p.get_double("thresholds", "front_tol_abs", th.front_tol_abs);
    th.front_flux_max = p.get_double("thresholds", "front_flux_max", th.front_flux_max);
    for (double v : {th.delta_scale, th.cauchy_final, th.pairing_delta, th.ode_factor,
                     th.weak_residual_max, th.identity_c, th.wlimit_max, th.front_tol_abs,
                     th.front_flux_max}) {
        if (!(v > 0.0)) {
            p.fail("thresholds: all threshold values must be > 0");
            break;
        }
    }
    if (th.ode_buffer_cells < 0) p.fail("ode_buffer_cells: must be >= 0");

    ParseResult result;
    result.errors = std::move(p.errors);
    if (result.errors.empty()) result.config = std::move(cfg);
    return result;
}

std::string render_manifest(const Config& c, double wall_time_s,
                            const std::vector<std::pair<std::string, std::string>>& extras) {
    std::ostringstream out;
    auto d = [](double v) { return format_double(v); };

    out << "[run]\n";
    out << "command = "
        << (c.command == Command::solve    ? "solve"
            : c.command == Command::sweep  ? "sweep"
            : c.command == Command::verify ? "verify"
                                           : "benchmark")
        << "\n";
    out << "out_dir = " << c.out_dir << "\n";
    out << "parallelism = " << c.parallelism << "\n";
    out << "quiet = " << (c.quiet ? "true" : "false") << "\n\n";

    out << "[grid]\n";
    out << "x_lo = " << d(c.grid.x_lo) << "\n";
    out << "x_hi = " << d(c.grid.x_hi) << "\n";
    out << "n_cells = " << c.grid.n_cells << "\n";
    out << "t_end = " << d(c.grid.t_end) << "\n";
    out << "n_steps = " << c.grid.n_steps << "\n\n";

    out << "[problem]\n";
    out << "preset = " << preset_name(c.preset) << "\n";
    out << "constant_value = " << d(c.preset_opt.constant_value) << "\n";
    out << "melt_ramp_start = " << d(c.preset_opt.melt_ramp_start) << "\n";
    out << "melt_ramp_width = " << d(c.preset_opt.melt_ramp_width) << "\n";
    out << "step_half_width = " << d(c.preset_opt.step_half_width) << "\n";
    out << "tent_half_width = " << d(c.preset_opt.tent_half_width) << "\n";
    out << "u_b = " << d(c.preset_opt.u_b) << "\n";
    out << "w0 = " << d(c.preset_opt.w0) << "\n";
    out << "t0 = " << d(c.preset_opt.t0) << "\n";
    if (!c.custom_csv.empty()) out << "custom_csv = " << c.custom_csv << "\n";
    out << "epsilon = " << d(c.epsilon) << "\n";
    out << "epsilon_list =";
    for (double e : c.epsilon_list) out << " " << d(e);
    out << "\n";
    switch (c.f.kind()) {
        case ReactionKind::zero:
            out << "f = zero\n";
            break;
        case ReactionKind::linear_decay:
            out << "f = linear_decay\n";
            out << "f_c = " << d(c.f.decay_rate()) << "\n";
            break;
        case ReactionKind::logistic:
            out << "f = logistic\n";
            out << "f_a = " << d(c.f.logistic_rate()) << "\n";
            out << "f_lambda = " << d(c.f.logistic_lambda()) << "\n";
            break;
        case ReactionKind::piecewise_linear:
            out << "f = piecewise_linear\n";
            out << "f_breakpoints =";
            for (const auto& b : c.f.breakpoints()) out << " " << d(b.u) << ":" << d(b.f);
            out << "\n";
            break;
    }
    out << "lambda = " << d(c.lambda) << "\n";
    auto render_bc = [&](const char* side, const std::optional<EndpointBc>& e) {
        if (!e) return;
        if (e->kind == EndpointBc::Kind::neumann_zero) {
            out << "bc_" << side << " = neumann\n";
        } else {
            out << "bc_" << side << " = dirichlet\n";
            out << "bc_" << side << "_trace =";
            for (const auto& [t, v] : e->trace.knots) out << " " << d(t) << ":" << d(v);
            out << "\n";
        }
    };
    render_bc("left", c.bc_left);
    render_bc("right", c.bc_right);
    out << "benchmark = "
        << (c.benchmark == BenchmarkKind::neumann       ? "neumann"
            : c.benchmark == BenchmarkKind::planar_wave ? "planar_wave"
                                                        : "linear_heat")
        << "\n";
    out << "export_transforms = " << (c.export_transforms ? "true" : "false") << "\n";
    out << "newton_tol = " << d(c.newton.tol) << "\n";
    out << "newton_max_iter = " << c.newton.max_iter << "\n\n";

    out << "[window]\n";
    out << "x_lo = " << d(c.window.x_lo) << "\n";
    out << "x_hi = " << d(c.window.x_hi) << "\n";
    out << "t_lo = " << d(c.window.t_lo) << "\n";
    out << "t_hi = " << d(c.window.t_hi) << "\n\n";

    const Thresholds& th = c.thresholds;
    out << "[thresholds]\n";
    out << "delta_scale = " << d(th.delta_scale) << "\n";
    out << "delta_floor = " << d(th.delta_floor) << "\n";
    out << "cauchy_final = " << d(th.cauchy_final) << "\n";
    out << "pairing_delta = " << d(th.pairing_delta) << "\n";
    out << "ode_factor = " << d(th.ode_factor) << "\n";
    out << "ode_buffer_cells = " << th.ode_buffer_cells << "\n";
    out << "weak_residual_max = " << d(th.weak_residual_max) << "\n";
    out << "weak_decrease_slack = " << d(th.weak_decrease_slack) << "\n";
    out << "identity_c = " << d(th.identity_c) << "\n";
    out << "wlimit_max = " << d(th.wlimit_max) << "\n";
    out << "front_tol_abs = " << d(th.front_tol_abs) << "\n";
    out << "front_flux_max = " << d(th.front_flux_max) << "\n\n";

    out << "[manifest]\n";
    out << "artifact_version = " << kArtifactVersion << "\n";
    out << "wall_time_s = " << d(wall_time_s) << "\n";
    for (const auto& [key, value] : extras) out << key << " = " << value << "\n";
    return out.str();
}

}  // namespace stefanlab
