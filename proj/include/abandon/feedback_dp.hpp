#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "abandon/action_grid.hpp"
#include "abandon/reward_model.hpp"
#include "abandon/threshold_dist.hpp"

namespace abandon {

/**
 * Value table of the posterior-interval dynamic program for a single user
 * with a fixed unknown threshold and crossing feedback.
 *
 * A state is the posterior "theta in (l, u)" with l, u on the action grid,
 * stored for every pair i < j. Playing y in [l, u) splits the posterior:
 * the user survives with probability (F(u) - F(y)) / (F(u) - F(l)), pays
 * r(y), and the state tightens to (y, u); otherwise the step pays nothing,
 * the user stays with the patience probability, and the state tightens to
 * (l, y). States whose interval carries no mass under F are collapsed to
 * the constant policy at l with value r(l) / (1 - gamma).
 *
 * Values are produced by Jacobi sweeps (every state updated from the
 * previous iterate), which converge at rate gamma in the sup norm and make
 * the result independent of the number of worker threads.
 */
struct IntervalValueTable {
    ActionGrid grid;
    double gamma = 0.0;
    double patience = 0.0;
    std::vector<double> values;      // triangular storage, see index()
    std::vector<int> policy;         // chosen action index k, i <= k < j
    std::vector<char> degenerate;    // 1 when F(u_j) - F(l_i) is below the mass floor
    std::vector<double> sweep_deltas;  // sup-norm change per sweep
    int iterations = 0;

    std::size_t index(int i, int j) const {
        return static_cast<std::size_t>(j) * (static_cast<std::size_t>(j) - 1) / 2 +
               static_cast<std::size_t>(i);
    }
    double value(int i, int j) const { return values[index(i, j)]; }
    int policy_at(int i, int j) const { return policy[index(i, j)]; }
    bool is_degenerate(int i, int j) const { return degenerate[index(i, j)] != 0; }
    std::size_t state_count() const { return values.size(); }
};

IntervalValueTable feedback_dp(const ThresholdDist& dist, const RewardModel& reward,
                               double gamma, double patience, const ActionGrid& grid,
                               double tol = 1e-6, int threads = 1);

/**
 * Greedy play of the computed table unrolled as a binary decision tree.
 * Each node holds a posterior interval and the action played there; the "S"
 * child is reached on survival, the "C" child on a tolerated crossing.
 * Nodes at the depth limit and nodes whose state is degenerate are leaves.
 */
struct PolicyTreeNode {
    std::string path;  // over {S, C}; empty at the root
    int depth = 0;
    double lower = 0.0;
    double upper = 0.0;
    double action = 0.0;
    bool leaf = false;
};

struct PolicyTree {
    int depth = 0;
    std::vector<PolicyTreeNode> nodes;  // breadth-first order
};

PolicyTree extract_policy_tree(const IntervalValueTable& table, int depth);

// (patience, first action of the table's root state) for each patience value.
std::vector<std::pair<double, double>> first_action_curve(
    const ThresholdDist& dist, const RewardModel& reward, double gamma,
    const std::vector<double>& patience_values, const ActionGrid& grid,
    double tol = 1e-6, int threads = 1);

// For each grid upper bound u: the widest band below u within which the
// computed policy already commits to the interval's lower endpoint, i.e. the
// largest eps such that policy(l, u) = l whenever u - l <= eps.
std::vector<std::pair<double, double>> partial_learning_scan(const IntervalValueTable& table);

// CSV writers. Value table schema: l,u,value,action. Tree schema:
// depth,path,l,u,action. First-action schema: p,x0.
void write_csv(const IntervalValueTable& table, std::ostream& out);
void write_csv(const PolicyTree& tree, std::ostream& out);
void write_first_action_csv(const std::vector<std::pair<double, double>>& curve,
                            std::ostream& out);

}  // namespace abandon
