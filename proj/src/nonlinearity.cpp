#include "stefanlab/nonlinearity.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace stefanlab {

Epsilon::Epsilon(double value) : value_(value) {
    if (!(value > 0.0) || !(value <= 1.0) || !std::isfinite(value)) {
        throw std::invalid_argument("epsilon must lie in (0, 1], got " + std::to_string(value));
    }
}

double alpha_eps(double u, Epsilon eps) {
    return u >= 0.0 ? u : eps.value() * u;
}

double beta_eps(double v, Epsilon eps) {
    return v >= 0.0 ? v : v / eps.value();
}

double beta_eps_slope(double v, Epsilon eps) {
    return v >= 0.0 ? 1.0 : 1.0 / eps.value();
}

NonlinearitySpec NonlinearitySpec::zero() {
    NonlinearitySpec s;
    s.kind_ = ReactionKind::zero;
    s.lipschitz_ = 0.0;
    return s;
}

NonlinearitySpec NonlinearitySpec::linear_decay(double c) {
    if (!(c >= 0.0) || !std::isfinite(c)) {
        throw std::invalid_argument("linear_decay rate must be >= 0");
    }
    NonlinearitySpec s;
    s.kind_ = ReactionKind::linear_decay;
    s.c_ = c;
    s.lipschitz_ = c;
    return s;
}

NonlinearitySpec NonlinearitySpec::logistic(double a, double lambda_bound) {
    if (!(a > 0.0) || !std::isfinite(a)) {
        throw std::invalid_argument("logistic rate must be > 0");
    }
    if (!(lambda_bound > 0.0) || !std::isfinite(lambda_bound)) {
        throw std::invalid_argument("logistic lambda bound must be > 0");
    }
    NonlinearitySpec s;
    s.kind_ = ReactionKind::logistic;
    s.a_ = a;
    s.lambda_ = lambda_bound;
    // max |f'| = a*(1 + 2*lambda) on [-lambda, lambda]
    s.lipschitz_ = a * (2.0 * lambda_bound + 1.0);
    return s;
}

NonlinearitySpec NonlinearitySpec::piecewise_linear(std::vector<Breakpoint> points) {
    if (points.size() < 2) {
        throw std::invalid_argument("piecewise_linear needs at least two breakpoints");
    }
    bool has_zero = false;
    double lip = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (!std::isfinite(points[i].u) || !std::isfinite(points[i].f)) {
            throw std::invalid_argument("piecewise_linear breakpoints must be finite");
        }
        if (i > 0) {
            if (!(points[i].u > points[i - 1].u)) {
                throw std::invalid_argument("piecewise_linear breakpoints must be strictly increasing in u");
            }
            lip = std::max(lip, std::abs(points[i].f - points[i - 1].f) /
                                    (points[i].u - points[i - 1].u));
        }
        if (points[i].u == 0.0 && points[i].f == 0.0) has_zero = true;
    }
    if (!has_zero) {
        throw std::invalid_argument("piecewise_linear requires a breakpoint (0, 0)");
    }
    NonlinearitySpec s;
    s.kind_ = ReactionKind::piecewise_linear;
    s.points_ = std::move(points);
    s.lipschitz_ = lip;
    return s;
}

double NonlinearitySpec::eval(double u) const {
    switch (kind_) {
        case ReactionKind::zero:
            return 0.0;
        case ReactionKind::linear_decay:
            return -c_ * u;
        case ReactionKind::logistic:
            return a_ * u * (1.0 - u);
        case ReactionKind::piecewise_linear: {
            if (u <= points_.front().u) return points_.front().f;
            if (u >= points_.back().u) return points_.back().f;
            auto it = std::upper_bound(points_.begin(), points_.end(), u,
                                       [](double x, const Breakpoint& b) { return x < b.u; });
            const Breakpoint& hi = *it;
            const Breakpoint& lo = *(it - 1);
            const double w = (u - lo.u) / (hi.u - lo.u);
            return lo.f + w * (hi.f - lo.f);
        }
    }
    return 0.0;
}

std::string NonlinearitySpec::describe() const {
    switch (kind_) {
        case ReactionKind::zero:
            return "zero";
        case ReactionKind::linear_decay:
            return "linear_decay(c=" + std::to_string(c_) + ")";
        case ReactionKind::logistic:
            return "logistic(a=" + std::to_string(a_) + ")";
        case ReactionKind::piecewise_linear:
            return "piecewise_linear(" + std::to_string(points_.size()) + " points)";
    }
    return "?";
}

}  // namespace stefanlab
