// Pointwise scalar maps: the reaction term f, the two-slope regularization
// alpha_eps and its exact inverse beta_eps.
#pragma once

#include <string>
#include <vector>

namespace stefanlab {

// Negative-branch diffusion slope, restricted to (0, 1].  The cap at 1 keeps
// the explicit oracle's CFL condition uniform over sweeps.
class Epsilon {
public:
    explicit Epsilon(double value);
    double value() const { return value_; }

private:
    double value_;
};

// alpha_eps(u) = u for u >= 0, eps*u for u <= 0.  Monotone, continuous at 0.
double alpha_eps(double u, Epsilon eps);

// Exact inverse of alpha_eps: v for v >= 0, v/eps for v <= 0.
double beta_eps(double v, Epsilon eps);

// Generalized derivative of beta_eps used by the semi-smooth Newton solver.
// At the kink v = 0 the smaller slope 1 is selected; any choice in [1, 1/eps]
// is admissible, the small one damps overshoot into the negative branch.
double beta_eps_slope(double v, Epsilon eps);

enum class ReactionKind { zero, linear_decay, logistic, piecewise_linear };

struct Breakpoint {
    double u;
    double f;
};

// Reaction term f with f(0) = 0 and a Lipschitz constant tracked at
// construction.  All evaluators are total functions.
class NonlinearitySpec {
public:
    static NonlinearitySpec zero();
    // f(u) = -c * u, c >= 0.
    static NonlinearitySpec linear_decay(double c);
    // f(u) = a * u * (1 - u), a > 0.  Lipschitz on [-lambda, lambda] with
    // constant a * (2*lambda + 1).
    static NonlinearitySpec logistic(double a, double lambda_bound);
    // Piecewise linear through the given breakpoints, constant beyond the end
    // breakpoints.  Requires strictly increasing u values and a breakpoint
    // (0, 0).
    static NonlinearitySpec piecewise_linear(std::vector<Breakpoint> points);

    double eval(double u) const;
    double lipschitz_bound() const { return lipschitz_; }
    ReactionKind kind() const { return kind_; }
    std::string describe() const;

    // Parameter accessors used by config round-tripping.
    double decay_rate() const { return c_; }
    double logistic_rate() const { return a_; }
    double logistic_lambda() const { return lambda_; }
    const std::vector<Breakpoint>& breakpoints() const { return points_; }

private:
    NonlinearitySpec() = default;

    ReactionKind kind_ = ReactionKind::zero;
    double lipschitz_ = 0.0;
    double c_ = 0.0;
    double a_ = 0.0;
    double lambda_ = 0.0;
    std::vector<Breakpoint> points_;
};

inline double eval_f(const NonlinearitySpec& spec, double u) { return spec.eval(u); }

}  // namespace stefanlab
