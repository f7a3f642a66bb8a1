#include "abandon/episode.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace abandon {

long truncation_horizon(double gamma, double max_step, double tol) {
    if (!(gamma > 0.0 && gamma < 1.0))
        throw std::invalid_argument("discount factor must lie in (0, 1)");
    if (!(tol > 0.0)) throw std::invalid_argument("truncation tolerance must be positive");
    if (max_step <= 0.0) return 0;
    const double target = tol * (1.0 - gamma) / max_step;
    if (target >= 1.0) return 0;
    return static_cast<long>(std::ceil(std::log(target) / std::log(gamma)));
}

namespace {

void validate(const ThetaProcess& process, const EpisodeConfig& cfg) {
    if (!(cfg.patience >= 0.0 && cfg.patience <= 1.0))
        throw std::invalid_argument("patience must lie in [0, 1]");
    if (!(cfg.action_hi > cfg.action_lo))
        throw std::invalid_argument("episode action space needs hi > lo");
    if (process.kind == ThetaProcess::Kind::iid && process.dist == nullptr)
        throw std::invalid_argument("iid theta process needs a threshold distribution");
    if (process.kind == ThetaProcess::Kind::fixed_plus_noise && process.noise == nullptr)
        throw std::invalid_argument("fixed-plus-noise theta process needs a noise model");
}

}  // namespace

EpisodeOutcome simulate_episode(AdaptivePolicy& policy, const ThetaProcess& process,
                                const RewardModel& reward, const EpisodeConfig& cfg,
                                RngStream& rng) {
    validate(process, cfg);
    const long horizon = truncation_horizon(cfg.gamma, reward.max_step(), cfg.trunc_tol);

    EpisodeOutcome out;
    double discount = 1.0;
    for (long t = 0; t < horizon; ++t) {
        const double x = policy.next_action();
        if (!std::isfinite(x) || x < cfg.action_lo || x > cfg.action_hi)
            throw std::invalid_argument("policy action " + std::to_string(x) +
                                        " lies outside the action space");

        double theta = process.theta;
        switch (process.kind) {
            case ThetaProcess::Kind::fixed:
                break;
            case ThetaProcess::Kind::iid:
                theta = process.dist->sample(rng);
                break;
            case ThetaProcess::Kind::fixed_plus_noise:
                theta += process.noise->sample(rng);
                break;
        }

        const bool crossed = x > theta;
        if (!crossed) out.discounted_reward += discount * reward.sample(x, rng);
        if (cfg.record_trajectory) out.trajectory.push_back({t, x, crossed});
        policy.observe(x, crossed);

        if (crossed) {
            const bool stays = cfg.patience >= 1.0 ||
                               (cfg.patience > 0.0 && rng.uniform01() < cfg.patience);
            if (!stays) {
                out.stop_time = t;
                out.normalized_reward = (1.0 - cfg.gamma) * out.discounted_reward;
                return out;
            }
        }
        discount *= cfg.gamma;
    }

    out.stop_time = horizon;
    out.survived_to_truncation = true;
    out.normalized_reward = (1.0 - cfg.gamma) * out.discounted_reward;
    return out;
}

}  // namespace abandon
