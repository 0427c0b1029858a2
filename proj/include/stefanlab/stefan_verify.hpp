// Certification of the limiting free-boundary object: waiting times T(x),
// monotone positivity sets, the latent-heat field W(x), the weak residual of
// the limiting formulation, and the melting-front flux balance.
#pragma once

#include <stdexcept>
#include <vector>

#include "stefanlab/grid.hpp"
#include "stefanlab/nonlinearity.hpp"
#include "stefanlab/test_function.hpp"
#include "stefanlab/transforms.hpp"

namespace stefanlab {

struct StationaryFront : std::runtime_error {
    StationaryFront() : std::runtime_error("no level crossings: the front is stationary") {}
};

// Per-node waiting time: the first time after which u stays at or above the
// detection threshold.  T < 0 encodes "never".
struct FreeBoundary {
    Grid1D grid;
    std::vector<double> waiting_time;  // seconds; kNever where u never persists above delta
    double delta = 0.0;
    double eps = 0.0;

    static constexpr double kNever = -1.0;
    bool never(int node) const { return waiting_time[node] < 0.0; }
    int level_of(int node) const;  // first persistent level; n_steps+1 for never
};

FreeBoundary extract_waiting_time(const SpaceTimeField& u, double delta, double eps = 0.0);

// (node, level) pairs where u >= delta at the level but drops below delta/2
// at some later level.  The limit theorem forbids such recrossings; at finite
// eps the count is expected to shrink along the sweep.
long monotonicity_violations(const SpaceTimeField& u, double delta);

struct LatentHeatField {
    Grid1D grid;
    std::vector<double> w_raw;       // -u0 - Int_0^T fbar; sign-indefinite where no ice
    std::vector<char> never_flag;    // T was "never": integral extends to t_end

    double latent(int node) const { return w_raw[node] > 0.0 ? w_raw[node] : 0.0; }
    double latent_at(double x) const;  // linear interpolation of the clamped field
};

// W(x) = -u0(x) - Int_0^{T(x)} fbar(x, s) ds, trapezoid to the extracted
// level.  fbar is the reaction proxy sampled on the finest run, i.e.
// f applied to its solution.
LatentHeatField compute_W(const ScalarField& u0, const SpaceTimeField& fbar_proxy,
                          const FreeBoundary& fb);

// R(eta) = Int Int [beta(u) d_t eta + u+ Lap eta + f(u+) eta] with
// beta(u) = u+ where u+ > delta and -W(x) otherwise; one residual per
// dictionary function.
std::vector<double> stefan_weak_residual(const SpaceTimeField& u_plus, const LatentHeatField& W,
                                         const NonlinearitySpec& f,
                                         const std::vector<TestFunction>& dictionary,
                                         double delta);

// Max over nodes well inside the positivity set (t > T(x) + 2 dt) of the
// discrete residual of
//   Lap w - d_t w = W(x) - Int_{T(x)}^t f(u(x,s)) ds
// with the transform taken at cut level 0.  The first term uses the signed
// w_raw so the identity also covers nodes that were never frozen.
double w_limit_equation_residual(const TransformedRun& tr, const LatentHeatField& W,
                                 const FreeBoundary& fb, const NonlinearitySpec& f);

struct FrontFluxParams {
    int smooth_window = 5;     // centered moving average on s(t)
    int speed_stride = 0;      // centered difference span in levels; 0 = auto from mean speed
    double gradient_floor = 1e-6;
    double mid_lo = 0.35;      // "mid-times" fraction of the run
    double mid_hi = 0.65;
};

struct FrontFluxReport {
    std::vector<int> levels;
    std::vector<double> position;
    std::vector<double> speed;
    std::vector<double> gradient;  // |dx u+| on the liquid side
    std::vector<double> mismatch;  // |W s' - |dx u+|| / max(|dx u+|, floor)

    double max_mismatch_mid(const Grid1D& grid, double mid_lo, double mid_hi) const;
};

// Tracks a single front (right edge of the positivity region) by delta-level
// crossing with linear interpolation; throws StationaryFront when no level
// has a crossing.
FrontFluxReport front_flux_check(const SpaceTimeField& u, const FreeBoundary& fb,
                                 const LatentHeatField& W, const FrontFluxParams& params = {});

}  // namespace stefanlab
