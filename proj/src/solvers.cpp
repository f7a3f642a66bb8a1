#include "abandon/solvers.hpp"

#include <cmath>
#include <limits>

namespace abandon {

namespace {

void check_gamma(double gamma) {
    if (!(gamma >= 0.0 && gamma < 1.0))
        throw std::invalid_argument("discount factor must lie in [0, 1)");
}

// Grid argmax with strict improvement, so ties go to the smallest x.
template <typename Objective>
ConstantSolution grid_argmax(const ActionGrid& grid, Objective&& objective) {
    double best = -std::numeric_limits<double>::infinity();
    int best_i = 0;
    for (int i = 0; i < grid.size(); ++i) {
        const double v = objective(grid.point(i));
        if (v > best) {
            best = v;
            best_i = i;
        }
    }
    if (!(best > 0.0))
        throw NumericError("objective vanishes on the whole action grid; no optimum to report");
    ConstantSolution s;
    s.x_star = grid.point(best_i);
    s.objective = best;
    s.value = best;
    return s;
}

}  // namespace

ConstantSolution solve_fixed(const ThresholdDist& dist, const RewardModel& reward,
                             const ActionGrid& grid, std::optional<double> gamma) {
    if (gamma) check_gamma(*gamma);
    ConstantSolution s = grid_argmax(
        grid, [&](double x) { return reward.mean(x) * dist.survival(x); });
    if (gamma) s.value = s.objective / (1.0 - *gamma);
    return s;
}

ConstantSolution solve_independent(const ThresholdDist& dist, const RewardModel& reward,
                                   double gamma, const ActionGrid& grid) {
    check_gamma(gamma);
    return grid_argmax(grid, [&](double x) {
        const double surv = dist.survival(x);
        return reward.mean(x) * surv / (1.0 - gamma * surv);
    });
}

BaselineValueTable value_iteration_baseline(const ThresholdDist& dist, const RewardModel& reward,
                                            double gamma, const ActionGrid& grid, double tol) {
    check_gamma(gamma);
    if (!(tol > 0.0)) throw std::invalid_argument("value iteration tolerance must be positive");

    const int n = grid.size();
    std::vector<double> p(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const double x = grid.point(i);
        p[static_cast<std::size_t>(i)] = reward.mean(x) * dist.survival(x);
    }

    BaselineValueTable table{grid, std::vector<double>(static_cast<std::size_t>(n), 0.0),
                             std::vector<int>(static_cast<std::size_t>(n), 0), 0};
    std::vector<double> next(static_cast<std::size_t>(n));

    constexpr int kMaxSweeps = 1000000;
    const double stop = tol * (1.0 - gamma);
    for (int sweep = 0;; ++sweep) {
        if (sweep >= kMaxSweeps)
            throw NumericError("running-maximum value iteration failed to converge");
        // J_{k+1}(x_i) = max_{j >= i} p_j + gamma J_k(x_j): one suffix-max pass.
        double running = -std::numeric_limits<double>::infinity();
        double delta = 0.0;
        for (int i = n - 1; i >= 0; --i) {
            const auto u = static_cast<std::size_t>(i);
            running = std::max(running, p[u] + gamma * table.J[u]);
            next[u] = running;
            delta = std::max(delta, std::abs(next[u] - table.J[u]));
        }
        table.J.swap(next);
        ++table.iterations;
        if (delta < stop) break;
    }

    // Greedy policy from the converged table; >= while scanning right to
    // left keeps the smallest maximizer.
    double best = -std::numeric_limits<double>::infinity();
    int best_j = n - 1;
    for (int i = n - 1; i >= 0; --i) {
        const auto u = static_cast<std::size_t>(i);
        const double c = p[u] + gamma * table.J[u];
        if (c >= best) {
            best = c;
            best_j = i;
        }
        table.policy[u] = best_j;
    }
    return table;
}

double noisy_constant_value(double x, double theta, const NoiseModel& noise,
                            const RewardModel& reward, double gamma) {
    check_gamma(gamma);
    const double q = noise.survival(x - theta);
    return q * reward.mean(x) / (1.0 - gamma * q);
}

double noisy_oracle_policy(double theta, const NoiseModel& noise, const RewardModel& reward,
                           double gamma, const ActionGrid& grid) {
    check_gamma(gamma);
    double best = -std::numeric_limits<double>::infinity();
    double best_x = grid.lo();
    for (int i = 0; i < grid.size(); ++i) {
        const double x = grid.point(i);
        const double v = noisy_constant_value(x, theta, noise, reward, gamma);
        if (v > best) {
            best = v;
            best_x = x;
        }
    }
    return best_x;
}

}  // namespace abandon
