#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "abandon/action_grid.hpp"
#include "abandon/reward_model.hpp"

namespace abandon {

// One bandit arm: a candidate action with its pull count and running mean
// of observed payoffs.
struct ArmState {
    double action = 0.0;
    std::uint64_t pulls = 0;
    double mean_payoff = 0.0;
};

// Incremental mean update.
void record_payoff(ArmState& arm, double payoff);

enum class Algorithm { ucb, moss, explore_exploit, oracle, fixed };

struct LearnerConfig {
    Algorithm algorithm = Algorithm::ucb;
    int arm_count = 12;       // K, number of candidate arms
    double alpha = 2.5;       // UCB exploration parameter, must exceed 2
    double sigma = 0.5;       // sub-Gaussian scale of the per-user payoff
    int explore_users = 110;  // m, probe length of the explore-exploit scheme
    double fixed_action = 0.0;

    // Throws std::invalid_argument on bad parameters for the chosen
    // algorithm; horizon is the number of users the learner will face.
    void validate(std::uint64_t horizon) const;
};

// K interior actions i / (K + 1), i = 1..K, scaled to [lo, hi]. The
// endpoints are excluded on purpose: the top of the support never pays.
std::vector<double> arm_actions(int arm_count, double lo, double hi);

// Arm-count recipe round(coeff * (n / log_base(n))^(1/4)), at least 2.
int discretization_arm_count(std::uint64_t horizon, double coeff = 2.5,
                             double log_base = 10.0);

// Upper confidence index after t users total: mean + sigma *
// sqrt(2 alpha ln t / pulls), infinite while the arm is unpulled.
double ucb_index(const ArmState& arm, std::uint64_t t, const LearnerConfig& cfg);

// MOSS index: mean + sqrt(max(0, ln(t / (K pulls))) / pulls), infinite
// while the arm is unpulled.
double moss_index(const ArmState& arm, std::uint64_t t, const LearnerConfig& cfg);

// Argmax of the index; ties (including several unpulled arms) go to the
// lowest arm index.
std::size_t ucb_select(std::span<const ArmState> arms, std::uint64_t t,
                       const LearnerConfig& cfg);
std::size_t moss_select(std::span<const ArmState> arms, std::uint64_t t,
                        const LearnerConfig& cfg);

// Empirical distribution of observed thresholds. operator() counts samples
// strictly below x, so survival(x) treats ties as surviving, matching the
// strict-crossing episode rule.
class EmpiricalCDF {
public:
    explicit EmpiricalCDF(std::vector<double> samples);

    double operator()(double x) const;
    double survival(double x) const { return 1.0 - (*this)(x); }
    std::size_t size() const { return sorted_.size(); }

private:
    std::vector<double> sorted_;
};

struct ExploreExploitState {
    std::vector<double> observed_thresholds;
    std::optional<double> committed_action;
};

void observe_threshold(ExploreExploitState& state, double theta);

/**
 * Two-phase scheme over a population of users arriving one at a time
 * (1-based). Users 1..m are probed at the top of the action space, which
 * pays nothing but reveals their threshold (recorded via
 * observe_threshold). Every later user gets the committed action: the
 * argmax of r(x) (1 - Fhat(x)) over the candidate grid joined with the
 * observed thresholds themselves, smallest x on ties.
 */
double explore_exploit_action(std::uint64_t user, ExploreExploitState& state,
                              const LearnerConfig& cfg, const RewardModel& reward,
                              const ActionGrid& candidates);

// Sequential per-user learner driven by the experiment harness: one
// choose/observe round trip per arriving user.
class PopulationLearner {
public:
    virtual ~PopulationLearner() = default;
    virtual double choose_action(std::uint64_t user) = 0;
    // payoff is the realized normalized payoff of the user; theta is the
    // user's threshold, read only by the explore-exploit idealization
    // during its probe phase.
    virtual void observe(std::uint64_t user, double action, double payoff, double theta) = 0;
};

std::unique_ptr<PopulationLearner> make_learner(const LearnerConfig& cfg,
                                                const RewardModel& reward,
                                                const ActionGrid& candidates,
                                                double oracle_action);

}  // namespace abandon
