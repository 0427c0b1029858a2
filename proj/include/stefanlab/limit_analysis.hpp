// Epsilon sweeps over a shared problem and the convergence diagnostics:
// uniform Cauchy behavior of u+, weak-* pairing stabilization of u-, the
// frozen-region ODE residual, and gradient convergence in L^2.
#pragma once

#include <vector>

#include "stefanlab/solver.hpp"
#include "stefanlab/test_function.hpp"

namespace stefanlab {

// 0.1 * 3^-k for k = 0..6.
std::vector<double> default_epsilon_list();

// Threshold separating "positive phase" from "frozen" at finite eps; the
// solution hovers at O(eps) near the interface, hence the eps scaling.
double delta_rule(double eps, double scale = 10.0, double floor = 1e-6);

struct EpsilonSweep {
    ProblemSpec base;              // its eps value is a placeholder
    std::vector<double> epsilons;  // strictly decreasing, in (0, 1], >= 3 entries
    Window window;
    NewtonParams newton;
    int parallelism = 1;

    void validate() const;
};

struct SweepReport {
    std::vector<double> epsilons;
    std::vector<SolverRun> runs;  // finest-eps run is the limit proxy
    std::vector<TestFunction> dictionary;
    NonlinearitySpec f = NonlinearitySpec::zero();

    std::vector<double> cauchy_sup;                            // K-1 consecutive sup distances
    std::vector<std::vector<double>> pairing_table;            // [K][n_eta], <u-, eta>
    std::vector<std::vector<double>> grad_l2_table;            // [K][n_eta]
    std::vector<std::vector<double>> identity_residual_table;  // [K][n_eta]
    std::vector<std::vector<double>> grad_dist_table;          // [K-1][n_eta], vs finest run

    int size() const { return static_cast<int>(epsilons.size()); }
    const SolverRun& finest() const { return runs.back(); }
};

// Solves every eps (parallel across runs) and assembles all diagnostics.
SweepReport run_sweep(const EpsilonSweep& sweep);

struct CauchyVerdict {
    bool pass = false;
    bool tail_decreasing = false;
    double final_value = 0.0;
    double threshold = 0.0;
    int tail_start = 0;
};

// Pass iff the Cauchy distances are non-increasing over the tail half of the
// list and the final entry is at or below the threshold.
CauchyVerdict positive_part_cauchy(const SweepReport& report, double threshold);

// Max over dictionary functions of |last pairing - second-to-last pairing|.
double weak_star_stabilization(const SweepReport& report);

struct OdeResidualField {
    std::vector<double> residual;  // meaningful only where applicable
    std::vector<char> applicable;  // u stayed below delta up to the end level

    double max_applicable() const;
    long applicable_count() const;
};

// At nodes with u(x, tau) < delta for all tau <= t (the finite-eps proxy for
// "outside Omega(t)"): |u(x,t) - u(x,s) - Int_s^t f(u(x,tau)) dtau| with a
// trapezoid integral.  Other nodes are marked not applicable.
OdeResidualField negative_ode_residual(const SpaceTimeField& u, const NonlinearitySpec& f,
                                       int level_s, int level_t, double delta);

struct OdeCleanResult {
    double max_residual = 0.0;
    long node_count = 0;  // 0 means the check is not applicable
};

// Max ODE residual over window nodes that stay below delta for the whole run
// and sit at least buffer_cells away from any node that ever reaches delta.
// The buffer plays the role of the boundary-layer exclusion: nodes the front
// is actively sweeping are mid-jump and belong to neither phase.
OdeCleanResult negative_ode_residual_clean(const SpaceTimeField& u, const NonlinearitySpec& f,
                                           int level_s, int level_t, double delta,
                                           int buffer_cells, const Window& window);

struct GradientDiagnostics {
    std::vector<double> energy;             // Int |dx u+|^2 eta^2 per eps
    std::vector<double> identity_residual;  // discrete energy-identity residual per eps
    std::vector<double> dist_to_finest;     // K-1 gradient L^2 distances
};

GradientDiagnostics gradient_l2_convergence(const SweepReport& report, const TestFunction& eta);

}  // namespace stefanlab
