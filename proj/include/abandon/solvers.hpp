#pragma once

#include <optional>
#include <stdexcept>
#include <vector>

#include "abandon/action_grid.hpp"
#include "abandon/noise_model.hpp"
#include "abandon/reward_model.hpp"
#include "abandon/threshold_dist.hpp"

namespace abandon {

// Numeric failure (non-convergence, vanishing objective), as opposed to a
// configuration error reported via std::invalid_argument.
struct NumericError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ConstantSolution {
    double x_star = 0.0;    // maximizer on the grid, smallest in case of ties
    double objective = 0.0; // maximized one-step objective
    double value = 0.0;     // discounted value of playing x_star forever
};

/// Fixed unknown threshold, no feedback used: maximizes r(x) (1 - F(x)) over
/// the grid. value = objective / (1 - gamma) when gamma is given, otherwise
/// the objective itself. Throws NumericError when the objective vanishes
/// everywhere (no optimum to report).
ConstantSolution solve_fixed(const ThresholdDist& dist, const RewardModel& reward,
                             const ActionGrid& grid,
                             std::optional<double> gamma = std::nullopt);

/// Fresh threshold draw each step: maximizes
/// r(x) (1 - F(x)) / (1 - gamma (1 - F(x))); this objective already equals
/// the discounted value.
ConstantSolution solve_independent(const ThresholdDist& dist, const RewardModel& reward,
                                   double gamma, const ActionGrid& grid);

/**
 * Value table of the fixed-threshold dynamic program over the running
 * maximum x of past actions, in the survival-transformed coordinates
 * J(x) = (1 - F(x)) V(x). Iteration
 *   J_{k+1}(x) = max_{y >= x} r(y)(1 - F(y)) + gamma J_k(y)
 * keeps J a suffix maximum, so each sweep is a single right-to-left pass.
 */
struct BaselineValueTable {
    ActionGrid grid;
    std::vector<double> J;
    std::vector<int> policy;  // greedy argmax index; policy[i] >= i
    int iterations = 0;

    double action(int i) const { return grid.point(policy[static_cast<std::size_t>(i)]); }
};

BaselineValueTable value_iteration_baseline(const ThresholdDist& dist, const RewardModel& reward,
                                            double gamma, const ActionGrid& grid,
                                            double tol = 1e-8);

/// Discounted value of playing x forever against theta_t = theta + eps_t:
/// q r(x) / (1 - gamma q) with q = P(eps >= x - theta).
double noisy_constant_value(double x, double theta, const NoiseModel& noise,
                            const RewardModel& reward, double gamma);

/// Best constant action for a known fixed component theta under additive
/// noise: grid argmax of noisy_constant_value, smallest x on ties.
double noisy_oracle_policy(double theta, const NoiseModel& noise, const RewardModel& reward,
                           double gamma, const ActionGrid& grid);

}  // namespace abandon
