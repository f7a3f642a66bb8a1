#include "abandon/threshold_dist.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "abandon/csv_io.hpp"

namespace abandon {

ThresholdDist ThresholdDist::uniform(double lo, double hi) {
    if (!(hi > lo)) throw std::invalid_argument("uniform threshold distribution needs hi > lo");
    return ThresholdDist(Kind::uniform, lo, hi);
}

ThresholdDist ThresholdDist::power(double k, double lo, double hi) {
    if (!(k > 0.0)) throw std::invalid_argument("power threshold distribution needs k > 0");
    if (!(hi > lo)) throw std::invalid_argument("power threshold distribution needs hi > lo");
    ThresholdDist d(Kind::power, lo, hi);
    d.power_k_ = k;
    return d;
}

ThresholdDist ThresholdDist::tabulated(std::vector<std::pair<double, double>> knots) {
    if (knots.size() < 2)
        throw std::invalid_argument("tabulated threshold distribution needs at least two knots");
    for (std::size_t i = 1; i < knots.size(); ++i) {
        if (!(knots[i].first > knots[i - 1].first))
            throw std::invalid_argument("tabulated CDF knots must have strictly increasing x");
        if (knots[i].second < knots[i - 1].second)
            throw std::invalid_argument("tabulated CDF values must be nondecreasing");
    }
    constexpr double kEndSlack = 1e-9;
    if (std::abs(knots.front().second) > kEndSlack)
        throw std::invalid_argument("tabulated CDF must start at 0");
    if (std::abs(knots.back().second - 1.0) > kEndSlack)
        throw std::invalid_argument("tabulated CDF must end at 1");
    knots.front().second = 0.0;
    knots.back().second = 1.0;

    ThresholdDist d(Kind::tabulated, knots.front().first, knots.back().first);
    d.knot_x_.reserve(knots.size());
    d.knot_f_.reserve(knots.size());
    for (const auto& [x, f] : knots) {
        d.knot_x_.push_back(x);
        d.knot_f_.push_back(f);
    }
    return d;
}

ThresholdDist ThresholdDist::tabulated_from_csv(const std::string& path) {
    return tabulated(csv::load_two_column_csv(path));
}

double ThresholdDist::cdf(double x) const {
    if (x <= lo_) return 0.0;
    if (x >= hi_) return 1.0;
    switch (kind_) {
        case Kind::uniform:
            return (x - lo_) / (hi_ - lo_);
        case Kind::power:
            return std::pow((x - lo_) / (hi_ - lo_), power_k_);
        case Kind::tabulated: {
            auto it = std::upper_bound(knot_x_.begin(), knot_x_.end(), x);
            auto i = static_cast<std::size_t>(it - knot_x_.begin());
            // lo_ < x < hi_ guarantees 0 < i < size
            const double x0 = knot_x_[i - 1], x1 = knot_x_[i];
            const double f0 = knot_f_[i - 1], f1 = knot_f_[i];
            return f0 + (f1 - f0) * (x - x0) / (x1 - x0);
        }
    }
    return 0.0;  // unreachable
}

double ThresholdDist::quantile(double q) const {
    if (!(q >= 0.0 && q <= 1.0)) throw std::invalid_argument("quantile argument must lie in [0, 1]");
    if (q <= 0.0) return lo_;
    if (q >= 1.0) return hi_;
    switch (kind_) {
        case Kind::uniform:
            return lo_ + q * (hi_ - lo_);
        case Kind::power:
            return lo_ + (hi_ - lo_) * std::pow(q, 1.0 / power_k_);
        case Kind::tabulated: {
            auto it = std::lower_bound(knot_f_.begin(), knot_f_.end(), q);
            auto i = static_cast<std::size_t>(it - knot_f_.begin());
            if (i == 0) return knot_x_.front();
            const double f0 = knot_f_[i - 1], f1 = knot_f_[i];
            if (f1 <= f0) return knot_x_[i];
            const double x0 = knot_x_[i - 1], x1 = knot_x_[i];
            return x0 + (x1 - x0) * (q - f0) / (f1 - f0);
        }
    }
    return lo_;  // unreachable
}

double ThresholdDist::conditional_survival(double y, double l, double u) const {
    if (!(l <= u)) throw std::invalid_argument("conditional_survival needs l <= u");
    if (y < l || y > u)
        throw std::invalid_argument("conditional_survival needs y inside [l, u]");
    const double fl = cdf(l), fu = cdf(u);
    const double mass = fu - fl;
    if (mass <= kDegenerateMass)
        throw std::domain_error("posterior interval carries no threshold mass");
    return std::clamp((fu - cdf(y)) / mass, 0.0, 1.0);
}

}  // namespace abandon
