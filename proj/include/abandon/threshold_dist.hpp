#pragma once

#include <string>
#include <utility>
#include <vector>

#include "abandon/rng.hpp"

namespace abandon {

/**
 * Distribution F of a user's tolerance threshold over the action space.
 * Immutable after construction, so instances can be shared across threads.
 *
 * Supported families:
 *   uniform(lo, hi)          F(x) = (x - lo) / (hi - lo)
 *   power(k, lo, hi)         F(x) = ((x - lo) / (hi - lo))^k, k > 0
 *   tabulated(knots)         piecewise-linear CDF through (x, F) knots
 */
class ThresholdDist {
public:
    enum class Kind { uniform, power, tabulated };

    static ThresholdDist uniform(double lo, double hi);
    static ThresholdDist power(double k, double lo = 0.0, double hi = 1.0);
    static ThresholdDist tabulated(std::vector<std::pair<double, double>> knots);
    // Two-column CSV of (x, F(x)) knots; an optional header line is skipped.
    static ThresholdDist tabulated_from_csv(const std::string& path);

    // F(x), clamped to 0 below the support and 1 above it.
    double cdf(double x) const;
    double survival(double x) const { return 1.0 - cdf(x); }

    // Inverse CDF for q in [0, 1].
    double quantile(double q) const;
    double sample(RngStream& rng) const { return quantile(rng.uniform01()); }

    /**
     * P(theta > y | l < theta < u) for y in [l, u]: equals 1 at y = l and 0
     * at y = u. Throws std::domain_error when the interval carries no mass
     * (F(u) - F(l) <= kDegenerateMass); callers must treat such a posterior
     * as collapsed to its lower endpoint.
     */
    double conditional_survival(double y, double l, double u) const;

    double support_lo() const { return lo_; }
    double support_hi() const { return hi_; }
    Kind kind() const { return kind_; }

    // Mass below which a posterior interval counts as degenerate.
    static constexpr double kDegenerateMass = 1e-12;

private:
    ThresholdDist(Kind kind, double lo, double hi) : kind_(kind), lo_(lo), hi_(hi) {}

    Kind kind_;
    double lo_;
    double hi_;
    double power_k_ = 1.0;
    std::vector<double> knot_x_;
    std::vector<double> knot_f_;
};

}  // namespace abandon
