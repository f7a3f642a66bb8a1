#pragma once

#include <stdexcept>
#include <vector>

namespace abandon {

// Uniform grid over [lo, hi] including both endpoints.
class ActionGrid {
public:
    ActionGrid(double lo, double hi, int count) : lo_(lo), hi_(hi), count_(count) {
        if (count < 2) throw std::invalid_argument("action grid needs at least two points");
        if (!(hi > lo)) throw std::invalid_argument("action grid needs hi > lo");
    }

    int size() const { return count_; }
    double lo() const { return lo_; }
    double hi() const { return hi_; }
    double spacing() const { return (hi_ - lo_) / (count_ - 1); }

    double point(int i) const {
        if (i == count_ - 1) return hi_;
        return lo_ + (hi_ - lo_) * static_cast<double>(i) / (count_ - 1);
    }

    std::vector<double> points() const {
        std::vector<double> out(static_cast<std::size_t>(count_));
        for (int i = 0; i < count_; ++i) out[static_cast<std::size_t>(i)] = point(i);
        return out;
    }

private:
    double lo_;
    double hi_;
    int count_;
};

}  // namespace abandon
