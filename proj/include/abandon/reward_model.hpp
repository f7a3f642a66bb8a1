#pragma once

#include <utility>
#include <vector>

#include "abandon/rng.hpp"

namespace abandon {

/**
 * Mean reward r(x) of playing action x for one step, plus an optional
 * bounded noise term around the mean. Carries the metadata the solvers and
 * robustness bounds need:
 *   max_step()   M, a hard cap on any single realized reward
 *   lipschitz()  L, a Lipschitz constant of r
 *   bound()      B, an upper bound on r over the action space
 */
class RewardModel {
public:
    enum class MeanKind { linear, constant, tabulated };
    enum class NoiseKind { deterministic, bounded_uniform };

    // r(x) = x on [lo, hi], lo >= 0.
    static RewardModel linear(double lo = 0.0, double hi = 1.0);
    static RewardModel constant(double c);
    // Piecewise-linear mean through (x, r) knots, r >= 0.
    static RewardModel tabulated(std::vector<std::pair<double, double>> knots);

    // Copy of this model whose samples are uniform on
    // [r(x) - w, r(x) + w] with w = min(r(x), M - r(x)), keeping the mean.
    RewardModel with_bounded_noise() const;

    double mean(double x) const;

    // One realized reward. Deterministic models return the mean and do not
    // touch the stream.
    double sample(double x, RngStream& rng) const;

    double max_step() const { return max_step_; }
    double lipschitz() const { return lipschitz_; }
    double bound() const { return bound_; }
    // True when r > 0 on the interior of the action space.
    bool positive_interior() const { return positive_interior_; }
    MeanKind mean_kind() const { return mean_kind_; }
    NoiseKind noise_kind() const { return noise_kind_; }

private:
    RewardModel() = default;

    MeanKind mean_kind_ = MeanKind::constant;
    NoiseKind noise_kind_ = NoiseKind::deterministic;
    double linear_lo_ = 0.0;
    double linear_hi_ = 1.0;
    double constant_ = 0.0;
    std::vector<double> knot_x_;
    std::vector<double> knot_r_;
    double max_step_ = 0.0;
    double lipschitz_ = 0.0;
    double bound_ = 0.0;
    bool positive_interior_ = false;
};

}  // namespace abandon
