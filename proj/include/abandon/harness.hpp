#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "abandon/action_grid.hpp"
#include "abandon/learners.hpp"
#include "abandon/noise_model.hpp"
#include "abandon/reward_model.hpp"
#include "abandon/threshold_dist.hpp"

namespace abandon {

// Best constant action against a population with thresholds drawn from
// dist: returns (x*, per-user normalized value r(x*)(1 - F(x*))).
std::pair<double, double> oracle_benchmark(const ThresholdDist& dist,
                                           const RewardModel& reward,
                                           const ActionGrid& grid);

struct ExperimentConfig {
    ThresholdDist dist = ThresholdDist::uniform(0.0, 1.0);
    RewardModel reward = RewardModel::linear();
    double gamma = 0.9;
    int users = 2000;        // population size n per repetition
    int repetitions = 50;
    std::uint64_t master_seed = 0;
    LearnerConfig learner;
    double trunc_tol = 1e-9;
    int grid_size = 10001;   // oracle / candidate grid over the support
    int threads = 0;         // 0 = hardware concurrency

    void validate() const;
};

struct RegretRecord {
    int rep = 0;
    int user = 0;        // 1-based arrival index
    double action = 0.0;
    double payoff = 0.0;      // realized normalized payoff
    double cum_regret = 0.0;  // user * p(x*) minus payoffs collected so far
};

/**
 * Runs cfg.repetitions independent populations of cfg.users against the
 * configured learner and records the regret path of each. Every (rep, user)
 * pair draws from its own substream of the master seed, so results are
 * identical for any thread count. With deterministic rewards a user's
 * normalized payoff is r(x) when x is tolerated and 0 otherwise; with
 * stochastic rewards it is measured by simulating the user's episode.
 * Records are ordered by (rep, user).
 */
std::vector<RegretRecord> run_regret_experiment(const ExperimentConfig& cfg);

struct RobustnessReport {
    std::string mode;           // "small-noise" or "large-noise"
    double policy_action = 0.0; // action the examined policy plays (first user)
    double policy_value = 0.0;  // its value under the perturbed model
    double half_width = 0.0;    // Monte Carlo half-width; 0 for quadrature
    double comparison = 0.0;    // best-case value the bound compares against
    double gap = 0.0;           // comparison - policy_value
    double bound = 0.0;         // theoretical cap on the gap
    bool satisfied = false;     // gap <= bound + half_width
    bool clamped = false;       // small-noise: x* - y fell below the support
    double lipschitz_v = 0.0;   // large-noise: scanned Lipschitz constant of v
};

/**
 * Fixed-threshold model perturbed by iid additive noise of the given
 * half-width y. Plays the shifted constant action x* - y (clamped to the
 * support), estimates its value by Monte Carlo over mc_episodes episodes,
 * and compares against the best case max_x r(x + y)(1 - F(x)) / (1 - gamma)
 * with the gap capped by 2 y L / (1 - gamma).
 */
RobustnessReport small_noise_experiment(const ThresholdDist& dist, const RewardModel& reward,
                                        double gamma, double noise_half_width,
                                        const ActionGrid& grid, long mc_episodes,
                                        std::uint64_t seed);

// Interval [lower, upper] meant to hold all but an eta fraction of the
// threshold mass: F(upper) - F(lower) >= 1 - eta.
struct EtaCover {
    double lower = 0.0;
    double upper = 0.0;
    double eta = 0.0;
};

/**
 * Noise wide relative to the threshold spread. Compares committing to the
 * cover midpoint's oracle action against the per-theta oracle, integrating
 * both values over the threshold distribution by quantile quadrature. The
 * gap is capped by L_v w / 2 + 2 eta B / (1 - gamma), where w is the cover
 * width and L_v is scanned numerically from the oracle value surface.
 */
RobustnessReport large_noise_experiment(const ThresholdDist& dist, const NoiseModel& noise,
                                        const RewardModel& reward, double gamma,
                                        const EtaCover& cover, const ActionGrid& grid);

// CSV writers. Regret schema: rep,user,action,payoff,cum_regret.
void write_csv(const std::vector<RegretRecord>& records, std::ostream& out);
void write_csv(const RobustnessReport& report, std::ostream& out);

}  // namespace abandon
