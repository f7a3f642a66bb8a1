#include "abandon/reward_model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace abandon {

RewardModel RewardModel::linear(double lo, double hi) {
    if (!(hi > lo)) throw std::invalid_argument("linear reward needs hi > lo");
    if (lo < 0.0) throw std::invalid_argument("linear reward needs lo >= 0");
    RewardModel m;
    m.mean_kind_ = MeanKind::linear;
    m.linear_lo_ = lo;
    m.linear_hi_ = hi;
    m.max_step_ = hi;
    m.lipschitz_ = 1.0;
    m.bound_ = hi;
    m.positive_interior_ = true;
    return m;
}

RewardModel RewardModel::constant(double c) {
    if (c < 0.0) throw std::invalid_argument("constant reward must be nonnegative");
    RewardModel m;
    m.mean_kind_ = MeanKind::constant;
    m.constant_ = c;
    m.max_step_ = c;
    m.lipschitz_ = 0.0;
    m.bound_ = c;
    m.positive_interior_ = c > 0.0;
    return m;
}

RewardModel RewardModel::tabulated(std::vector<std::pair<double, double>> knots) {
    if (knots.size() < 2)
        throw std::invalid_argument("tabulated reward needs at least two knots");
    RewardModel m;
    m.mean_kind_ = MeanKind::tabulated;
    double max_r = 0.0;
    double max_slope = 0.0;
    for (std::size_t i = 0; i < knots.size(); ++i) {
        const auto& [x, r] = knots[i];
        if (r < 0.0) throw std::invalid_argument("tabulated reward values must be nonnegative");
        if (i > 0) {
            if (!(x > knots[i - 1].first))
                throw std::invalid_argument("tabulated reward knots must have strictly increasing x");
            max_slope = std::max(max_slope,
                                 std::abs(r - knots[i - 1].second) / (x - knots[i - 1].first));
        }
        max_r = std::max(max_r, r);
        m.knot_x_.push_back(x);
        m.knot_r_.push_back(r);
    }
    m.max_step_ = max_r;
    m.lipschitz_ = max_slope;
    m.bound_ = max_r;
    // Positive on the open interval iff every interior knot is positive and
    // the function is not identically zero; zeros at the two endpoints only
    // touch the boundary.
    bool interior_positive = max_r > 0.0;
    for (std::size_t i = 1; i + 1 < m.knot_r_.size(); ++i)
        if (m.knot_r_[i] <= 0.0) interior_positive = false;
    m.positive_interior_ = interior_positive;
    return m;
}

RewardModel RewardModel::with_bounded_noise() const {
    RewardModel m = *this;
    m.noise_kind_ = NoiseKind::bounded_uniform;
    return m;
}

double RewardModel::mean(double x) const {
    switch (mean_kind_) {
        case MeanKind::linear:
            return std::clamp(x, linear_lo_, linear_hi_);
        case MeanKind::constant:
            return constant_;
        case MeanKind::tabulated: {
            if (x <= knot_x_.front()) return knot_r_.front();
            if (x >= knot_x_.back()) return knot_r_.back();
            auto it = std::upper_bound(knot_x_.begin(), knot_x_.end(), x);
            auto i = static_cast<std::size_t>(it - knot_x_.begin());
            const double x0 = knot_x_[i - 1], x1 = knot_x_[i];
            const double r0 = knot_r_[i - 1], r1 = knot_r_[i];
            return r0 + (r1 - r0) * (x - x0) / (x1 - x0);
        }
    }
    return 0.0;  // unreachable
}

double RewardModel::sample(double x, RngStream& rng) const {
    const double r = mean(x);
    if (noise_kind_ == NoiseKind::deterministic) return r;
    const double w = std::max(0.0, std::min(r, max_step_ - r));
    if (w == 0.0) return r;
    return r + w * (2.0 * rng.uniform01() - 1.0);
}

}  // namespace abandon
