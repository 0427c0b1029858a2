#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "stefanlab/benchmarks.hpp"

using namespace stefanlab;

TEST_CASE("erf endpoints, symmetry and independent cross-check") {
    CHECK(stefanlab::erf(0.0) == 0.0);
    CHECK(std::abs(stefanlab::erf(8.0) - 1.0) <= 1e-15);
    CHECK(stefanlab::erf(-1.5) == -stefanlab::erf(1.5));
    for (double x = -6.0; x <= 6.0; x += 0.03125) {
        CHECK(stefanlab::erf(x) == doctest::Approx(std::erf(x)).epsilon(1e-14));
    }
}

TEST_CASE("erf derivative identity by finite differences") {
    const double two_over_sqrt_pi = 2.0 / std::sqrt(std::acos(-1.0));
    for (double x : {0.0, 0.3, 1.0, 2.2, 3.5, 4.5}) {
        const double dx = 1e-6;
        const double fd = (stefanlab::erf(x + dx) - stefanlab::erf(x - dx)) / (2.0 * dx);
        const double exact = two_over_sqrt_pi * std::exp(-x * x);
        CHECK(std::abs(fd - exact) <= 1e-8);
    }
}

TEST_CASE("neumann lambda root properties") {
    // small driving ratio: lambda ~ sqrt(ratio/2) -> 0
    CHECK(neumann_lambda(1e-6, 1.0) < 1e-3);
    // monotone in the ratio
    CHECK(neumann_lambda(2.0, 1.0) > neumann_lambda(1.0, 1.0));
    // the residual of the transcendental equation is at the bisection floor
    const double lam = neumann_lambda(1.0, 1.0);
    const double sqrt_pi = std::sqrt(std::acos(-1.0));
    CHECK(std::abs(sqrt_pi * lam * std::exp(lam * lam) * stefanlab::erf(lam) - 1.0) <= 1e-12);
    // frozen regression value for u_b = w0 = 1
    CHECK(lam == doctest::Approx(0.620062633313595).epsilon(1e-9));
    CHECK_THROWS_AS(neumann_lambda(-1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(neumann_lambda(1e30, 1.0), std::invalid_argument);
}

TEST_CASE("neumann profile boundary, front and flux identity") {
    const NeumannSolution sol = NeumannSolution::make(1.0, 1.0);
    CHECK(sol.eval(0.0, 0.25) == doctest::Approx(1.0));
    const double s = sol.front(0.25);
    CHECK(s == doctest::Approx(2.0 * sol.lambda * 0.5));
    CHECK(sol.eval(s, 0.25) == 0.0);
    CHECK(sol.eval(s * (1.0 - 1e-12), 0.25) <= 1e-10);

    for (double t : {0.1, 0.5, 1.0}) {
        const double lhs = sol.w0 * sol.front_speed(t);
        const double rhs = -sol.front_gradient(t);
        CHECK(std::abs(lhs - rhs) <= 1e-10);
    }
    const NeumannEval at = neumann_eval(sol, 0.1, 0.25);
    CHECK(at.front == doctest::Approx(sol.front(0.25)));
    CHECK(at.u == doctest::Approx(sol.eval(0.1, 0.25)));
}

TEST_CASE("planar wave profile and free-line behavior") {
    const PlanarWave pw{2.0, 1.5};
    // zero on the free line t = -xi x
    for (double x : {-0.5, -0.1, -0.9}) {
        CHECK(pw.eval(x, -pw.slope * x) == 0.0);
    }
    // approaches the amplitude deep inside the support
    CHECK(pw.eval(-100.0, 0.0) == doctest::Approx(2.0).epsilon(1e-12));
    // vanishes outside
    CHECK(pw.eval(1.0, 1.0) == 0.0);
}

TEST_CASE("planar wave solves the heat equation in closed form") {
    const PlanarWave pw{1.0, 1.0};
    int samples = 0;
    for (double x = -2.0; x <= 0.0 && samples < 100; x += 0.11) {
        for (double t = -1.0; t < -pw.slope * x && samples < 100; t += 0.13) {
            const double res = pw.dt_(x, t) - pw.dxx(x, t);
            CHECK(std::abs(res) <= 1e-12);
            ++samples;
        }
    }
    CHECK(samples == 100);
}

TEST_CASE("planar wave satisfies the front flux identity") {
    for (double amplitude : {0.5, 1.0, 3.0}) {
        for (double xi : {0.5, 1.0, 2.0}) {
            const PlanarWave pw{amplitude, xi};
            // sample approaching the free line from inside the support
            const double x = -0.4;
            const double t = -xi * x - 1e-13;
            const double grad_sq = pw.dx(x, t) * pw.dx(x, t);
            CHECK(grad_sq ==
                  doctest::Approx(amplitude * amplitude / (xi * xi)).epsilon(1e-10));
            CHECK(grad_sq == doctest::Approx(-amplitude * pw.dt_(x, t)).epsilon(1e-10));
        }
    }
}

TEST_CASE("linear heat sweep: trivial data gives zero distances") {
    const Grid1D g = Grid1D::make(-1.0, 1.0, 100, 1.0, 100);
    const Window w{-0.75, 0.75, 0.1, 0.9};
    const std::vector<double> eps{1e-1, 1e-2};

    // phi >= 0 means phi^- = 0
    const ScalarField pos = ScalarField::sample(g, [](double x) { return 0.5 + x * x; });
    for (double dist : linear_heat_viscosity_sweep(pos, eps, w, 0.9, 90)) {
        CHECK(dist == 0.0);
    }

    // constant phi^-: invariant under the flow
    const ScalarField c = ScalarField::sample(g, [](double) { return -0.7; });
    for (double dist : linear_heat_viscosity_sweep(c, eps, w, 0.9, 90)) {
        CHECK(dist <= 1e-12);
    }
}

TEST_CASE("linear heat sweep on a tent shrinks with eps") {
    const Grid1D g = Grid1D::make(-1.0, 1.0, 200, 1.0, 200);
    const Window w{-0.75, 0.75, 0.1, 0.9};
    const ScalarField phi = ScalarField::sample(g, [](double x) {
        return -std::max(0.0, 1.0 - std::abs(x) / 0.3);  // phi^- is the tent
    });
    const std::vector<double> eps{1e-1, 1e-2, 1e-3, 1e-4};
    const auto dist = linear_heat_viscosity_sweep(phi, eps, w, 0.9, 900);
    for (std::size_t k = 1; k < dist.size(); ++k) CHECK(dist[k] < dist[k - 1]);
    CHECK(dist.back() <= 0.05);
}
