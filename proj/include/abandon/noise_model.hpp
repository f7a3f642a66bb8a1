#pragma once

#include <algorithm>
#include <stdexcept>

#include "abandon/rng.hpp"

namespace abandon {

// Additive per-step threshold noise eps. survival(d) = P(eps >= d) is the
// chance that a fixed gap d = x - theta is tolerated for one more step; ties
// count as tolerated, matching the strict-crossing rule of the episode model.
class NoiseModel {
public:
    enum class Kind { none, uniform };

    static NoiseModel none() { return NoiseModel(Kind::none, 0.0); }

    // Uniform on [-half_width, half_width].
    static NoiseModel uniform(double half_width) {
        if (!(half_width > 0.0)) throw std::invalid_argument("noise half-width must be positive");
        return NoiseModel(Kind::uniform, half_width);
    }

    // G(y) = P(eps <= y).
    double cdf(double y) const {
        if (kind_ == Kind::none) return y >= 0.0 ? 1.0 : 0.0;
        return std::clamp((y + w_) / (2.0 * w_), 0.0, 1.0);
    }

    // Gbar(y) = P(eps >= y); equals 1 - cdf(y) except at atoms.
    double survival(double y) const {
        if (kind_ == Kind::none) return y <= 0.0 ? 1.0 : 0.0;
        return std::clamp((w_ - y) / (2.0 * w_), 0.0, 1.0);
    }

    double sample(RngStream& rng) const {
        if (kind_ == Kind::none) return 0.0;
        return rng.uniform(-w_, w_);
    }

    double lo() const { return kind_ == Kind::none ? 0.0 : -w_; }
    double hi() const { return kind_ == Kind::none ? 0.0 : w_; }
    Kind kind() const { return kind_; }

private:
    NoiseModel(Kind kind, double w) : kind_(kind), w_(w) {}

    Kind kind_;
    double w_;
};

}  // namespace abandon
