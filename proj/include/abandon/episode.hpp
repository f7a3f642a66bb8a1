#pragma once

#include <vector>

#include "abandon/noise_model.hpp"
#include "abandon/reward_model.hpp"
#include "abandon/rng.hpp"
#include "abandon/threshold_dist.hpp"

namespace abandon {

/**
 * One-user episode model. At each step t the policy picks an action x_t, the
 * user's effective threshold theta_t is realized, and the step is a crossing
 * when x_t > theta_t (a tie x_t = theta_t is tolerated). A surviving step
 * pays a reward draw at x_t; a crossing pays nothing and the user abandons
 * with probability 1 - patience. Rewards are discounted by gamma per step.
 */
class AdaptivePolicy {
public:
    virtual ~AdaptivePolicy() = default;
    virtual double next_action() = 0;
    // Called after every step with the action played and whether it crossed.
    virtual void observe(double action, bool crossed) {
        (void)action;
        (void)crossed;
    }
};

class ConstantPolicy final : public AdaptivePolicy {
public:
    explicit ConstantPolicy(double x) : x_(x) {}
    double next_action() override { return x_; }

private:
    double x_;
};

// How the per-step threshold sequence theta_t is generated.
struct ThetaProcess {
    enum class Kind { fixed, iid, fixed_plus_noise };

    Kind kind = Kind::fixed;
    double theta = 0.0;
    const ThresholdDist* dist = nullptr;
    const NoiseModel* noise = nullptr;

    // theta_t = theta for all t.
    static ThetaProcess fixed_theta(double theta) {
        ThetaProcess p;
        p.kind = Kind::fixed;
        p.theta = theta;
        return p;
    }

    // theta_t drawn fresh from dist each step.
    static ThetaProcess iid(const ThresholdDist& dist) {
        ThetaProcess p;
        p.kind = Kind::iid;
        p.dist = &dist;
        return p;
    }

    // theta_t = theta + eps_t with eps_t drawn from noise each step.
    static ThetaProcess fixed_plus_noise(double theta, const NoiseModel& noise) {
        ThetaProcess p;
        p.kind = Kind::fixed_plus_noise;
        p.theta = theta;
        p.noise = &noise;
        return p;
    }
};

struct EpisodeConfig {
    double gamma = 0.9;
    double patience = 0.0;    // P(user stays after a crossing)
    double trunc_tol = 1e-9;  // discounted mass left on the table at truncation
    double action_lo = 0.0;
    double action_hi = 1.0;
    bool record_trajectory = false;
};

struct TrajectoryStep {
    long t = 0;
    double action = 0.0;
    bool crossed = false;
};

struct EpisodeOutcome {
    long stop_time = 0;  // abandonment step, or the horizon when truncated
    bool survived_to_truncation = false;
    double discounted_reward = 0.0;
    double normalized_reward = 0.0;  // (1 - gamma) * discounted_reward
    std::vector<TrajectoryStep> trajectory;
};

// Smallest T with gamma^T * max_step / (1 - gamma) < tol: beyond T the
// remaining discounted reward cannot matter at tolerance tol.
long truncation_horizon(double gamma, double max_step, double tol);

EpisodeOutcome simulate_episode(AdaptivePolicy& policy, const ThetaProcess& process,
                                const RewardModel& reward, const EpisodeConfig& cfg,
                                RngStream& rng);

}  // namespace abandon
