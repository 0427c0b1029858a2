#include <doctest.h>

#include <cmath>
#include <numbers>

#include "stefanlab/transforms.hpp"

using namespace stefanlab;

namespace {

const double kPi = std::numbers::pi;

SpaceTimeField fill(const Grid1D& g, double (*fn)(double, double)) {
    SpaceTimeField out(g);
    for (int m = 0; m <= g.n_steps; ++m) {
        for (int i = 0; i <= g.n_cells; ++i) out.at(m, i) = fn(g.x(i), g.t(m));
    }
    return out;
}

SolverRun constant_run(const Grid1D& g, double value, double eps) {
    ProblemSpec spec = ProblemSpec::make(
        g, Epsilon(eps), NonlinearitySpec::zero(),
        ScalarField::sample(g, [&](double) { return value; }), BoundarySpec::neumann_zero(),
        std::max(1.0, std::abs(value)));
    return solve(spec);
}

}  // namespace

TEST_CASE("compute_v clamps through alpha and stays eps-close to u+") {
    const Grid1D g = Grid1D::make(-1.0, 1.0, 16, 1.0, 8);
    const Epsilon eps(0.01);

    const SpaceTimeField neg = fill(g, [](double, double) { return -1.0; });
    const SpaceTimeField v_neg = compute_v(neg, eps);
    CHECK(v_neg.at(3, 5) == doctest::Approx(-0.01));

    const SpaceTimeField pos = fill(g, [](double x, double t) { return 1.0 + x * x + t; });
    const SpaceTimeField v_pos = compute_v(pos, eps);
    for (int m = 0; m <= g.n_steps; ++m) {
        for (int i = 0; i <= g.n_cells; ++i) CHECK(v_pos.at(m, i) == pos.at(m, i));
    }

    const SpaceTimeField mixed = fill(g, [](double x, double t) { return std::sin(3 * x + t); });
    const SpaceTimeField v_mixed = compute_v(mixed, eps);
    double worst = 0.0, neg_sup = 0.0;
    for (int m = 0; m <= g.n_steps; ++m) {
        for (int i = 0; i <= g.n_cells; ++i) {
            worst =
                std::max(worst, std::abs(positive_part(mixed.at(m, i)) - v_mixed.at(m, i)));
            neg_sup = std::max(neg_sup, negative_part(mixed.at(m, i)));
        }
    }
    CHECK(worst == doctest::Approx(eps.value() * neg_sup).epsilon(1e-12));
}

TEST_CASE("compute_w integrates exactly on constants and linear ramps") {
    const Grid1D g = Grid1D::make(0.0, 1.0, 8, 1.0, 10);
    const int h_level = 2;

    const SpaceTimeField c = fill(g, [](double, double) { return 3.0; });
    const SpaceTimeField w = compute_w(c, h_level);
    for (int m = 0; m <= g.n_steps; ++m) {
        const double expected = m <= h_level ? 0.0 : 3.0 * (g.t(m) - g.t(h_level));
        CHECK(w.at(m, 4) == doctest::Approx(expected).epsilon(1e-14));
    }

    const SpaceTimeField zero = fill(g, [](double, double) { return 0.0; });
    CHECK(compute_w(zero, 0).sup_norm() == 0.0);

    const SpaceTimeField lin = fill(g, [](double, double t) { return t; });
    const SpaceTimeField w_lin = compute_w(lin, h_level);
    const double th = g.t(h_level);
    for (int m = h_level; m <= g.n_steps; ++m) {
        const double expected = 0.5 * (g.t(m) * g.t(m) - th * th);
        CHECK(w_lin.at(m, 0) == doctest::Approx(expected).epsilon(1e-14));
    }
    CHECK_THROWS_AS(compute_w(lin, 99), std::invalid_argument);
}

TEST_CASE("compute_g hand examples") {
    const Grid1D g = Grid1D::make(-1.0, 1.0, 8, 1.0, 10);
    const auto f0 = NonlinearitySpec::zero();

    const Epsilon eps(0.25);
    const SpaceTimeField neg = fill(g, [](double, double) { return -1.0; });
    const SpaceTimeField g_neg = compute_g(neg, eps, 0, f0);
    for (int m = 0; m <= g.n_steps; ++m) {
        CHECK(g_neg.at(m, 3) == doctest::Approx(0.25).epsilon(1e-14));  // = eps
    }

    const SpaceTimeField pos = fill(g, [](double, double) { return 0.7; });
    const SpaceTimeField g_pos = compute_g(pos, eps, 0, f0);
    CHECK(g_pos.at(5, 2) == doctest::Approx(-0.7).epsilon(1e-14));

    const SpaceTimeField zero = fill(g, [](double, double) { return 0.0; });
    CHECK(compute_g(zero, eps, 0, f0).sup_norm() == 0.0);
}

TEST_CASE("w equation residual vanishes on constant solutions") {
    const Grid1D g = Grid1D::make(-1.0, 1.0, 32, 0.5, 50);
    for (double value : {-1.0, 0.0, 0.6}) {
        const double eps = 0.2;
        const SolverRun run = constant_run(g, value, eps);
        const ProblemSpec spec = ProblemSpec::make(
            g, Epsilon(eps), NonlinearitySpec::zero(),
            ScalarField::sample(g, [&](double) { return value; }), BoundarySpec::neumann_zero(),
            1.0);
        for (int h_level : {0, 10}) {
            const TransformedRun tr = make_transformed(run, spec, h_level);
            CHECK(w_equation_residual(tr) <= 1e-9);
        }
    }
}

TEST_CASE("w equation residual is consistent on the heat benchmark") {
    auto residual_at = [](int n, int steps) {
        const Grid1D g = Grid1D::make(-1.0, 1.0, n, 0.25, steps);
        ProblemSpec spec = ProblemSpec::make(
            g, Epsilon(1.0), NonlinearitySpec::zero(),
            ScalarField::sample(g, [](double x) { return std::cos(kPi * x); }),
            BoundarySpec::neumann_zero(), 1.0);
        const SolverRun run = solve(spec);
        return w_equation_residual(make_transformed(run, spec, 0));
    };
    const double coarse = residual_at(40, 100);
    const double fine = residual_at(80, 400);
    CHECK(fine < coarse);
    CHECK(fine <= 0.5 * coarse);  // at least first order under joint refinement
}

TEST_CASE("transform bounds mirror the a-priori estimates") {
    const Grid1D g = Grid1D::make(-1.0, 1.0, 48, 1.0, 200);
    const double eps = 0.05;
    const double lambda = 1.0;
    ProblemSpec spec = ProblemSpec::make(
        g, Epsilon(eps), NonlinearitySpec::linear_decay(0.5),
        ScalarField::sample(g, [](double x) { return x < 0.0 ? 0.9 : -0.9; }),
        BoundarySpec::neumann_zero(), lambda);
    const SolverRun run = solve(spec);
    const TransformedRun tr = make_transformed(run, spec, 0);

    // w stays within [-lambda*eps*t_end, lambda*t_end]
    double w_min = 0.0, w_max = 0.0;
    for (int m = 0; m <= g.n_steps; ++m) {
        for (int i = 0; i <= g.n_cells; ++i) {
            w_min = std::min(w_min, tr.w.at(m, i));
            w_max = std::max(w_max, tr.w.at(m, i));
        }
    }
    CHECK(w_min >= -lambda * eps * g.t_end * (1.0 + 1e-9));
    CHECK(w_max <= lambda * g.t_end * (1.0 + 1e-9));

    // discrete d/dt w = (v^m + v^{m-1})/2 >= -eps*lambda
    for (int m = 1; m <= g.n_steps; ++m) {
        for (int i = 0; i <= g.n_cells; ++i) {
            const double ddt = (tr.w.at(m, i) - tr.w.at(m - 1, i)) / g.dt();
            CHECK(ddt >= -eps * lambda * (1.0 + 1e-9));
        }
    }

    // |g| <= (2 lambda + L lambda t_end)(1 + tol)
    const double bound =
        (2.0 * lambda + spec.f.lipschitz_bound() * lambda * g.t_end) * (1.0 + 1e-9);
    CHECK(tr.g.sup_norm() <= bound);

    // w is non-decreasing in t wherever v >= 0
    for (int m = 1; m <= g.n_steps; ++m) {
        for (int i = 0; i <= g.n_cells; ++i) {
            if (tr.v.at(m - 1, i) >= 0.0 && tr.v.at(m, i) >= 0.0) {
                CHECK(tr.w.at(m, i) >= tr.w.at(m - 1, i) - 1e-15);
            }
        }
    }
}
