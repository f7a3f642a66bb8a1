#include "abandon/learners.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace abandon {

void record_payoff(ArmState& arm, double payoff) {
    arm.pulls += 1;
    arm.mean_payoff += (payoff - arm.mean_payoff) / static_cast<double>(arm.pulls);
}

void LearnerConfig::validate(std::uint64_t horizon) const {
    switch (algorithm) {
        case Algorithm::ucb:
            if (!(alpha > 2.0))
                throw std::invalid_argument("UCB needs alpha > 2");
            if (!(sigma > 0.0)) throw std::invalid_argument("UCB needs sigma > 0");
            [[fallthrough]];
        case Algorithm::moss:
            if (arm_count < 2)
                throw std::invalid_argument("bandit learners need at least two arms");
            break;
        case Algorithm::explore_exploit:
            if (explore_users < 1)
                throw std::invalid_argument("explore-exploit needs at least one probe user");
            if (static_cast<std::uint64_t>(explore_users) >= horizon)
                throw std::invalid_argument(
                    "explore-exploit probe phase must be shorter than the horizon");
            break;
        case Algorithm::oracle:
        case Algorithm::fixed:
            break;
    }
}

std::vector<double> arm_actions(int arm_count, double lo, double hi) {
    if (arm_count < 1) throw std::invalid_argument("arm count must be positive");
    if (!(hi > lo)) throw std::invalid_argument("arm actions need hi > lo");
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(arm_count));
    for (int i = 1; i <= arm_count; ++i)
        out.push_back(lo + (hi - lo) * static_cast<double>(i) / (arm_count + 1));
    return out;
}

int discretization_arm_count(std::uint64_t horizon, double coeff, double log_base) {
    if (horizon < 2) throw std::invalid_argument("arm-count recipe needs a horizon of at least 2");
    if (!(log_base > 1.0)) throw std::invalid_argument("arm-count recipe needs log base > 1");
    const double n = static_cast<double>(horizon);
    const double denom = std::log(n) / std::log(log_base);
    const double k = coeff * std::pow(n / denom, 0.25);
    return std::max(2, static_cast<int>(std::llround(k)));
}

double ucb_index(const ArmState& arm, std::uint64_t t, const LearnerConfig& cfg) {
    if (arm.pulls == 0) return std::numeric_limits<double>::infinity();
    if (t < 1) throw std::invalid_argument("UCB index needs t >= 1");
    const double bonus =
        cfg.sigma * std::sqrt(2.0 * cfg.alpha * std::log(static_cast<double>(t)) /
                              static_cast<double>(arm.pulls));
    return arm.mean_payoff + bonus;
}

double moss_index(const ArmState& arm, std::uint64_t t, const LearnerConfig& cfg) {
    if (arm.pulls == 0) return std::numeric_limits<double>::infinity();
    if (t < 1) throw std::invalid_argument("MOSS index needs t >= 1");
    const double ratio = static_cast<double>(t) /
                         (static_cast<double>(cfg.arm_count) * static_cast<double>(arm.pulls));
    const double bonus =
        std::sqrt(std::max(0.0, std::log(ratio)) / static_cast<double>(arm.pulls));
    return arm.mean_payoff + bonus;
}

namespace {

template <typename Index>
std::size_t select_by_index(std::span<const ArmState> arms, Index&& index) {
    if (arms.empty()) throw std::invalid_argument("cannot select from an empty arm set");
    std::size_t best = 0;
    double best_value = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < arms.size(); ++i) {
        const double v = index(arms[i]);
        if (v > best_value) {
            best_value = v;
            best = i;
        }
    }
    return best;
}

}  // namespace

std::size_t ucb_select(std::span<const ArmState> arms, std::uint64_t t,
                       const LearnerConfig& cfg) {
    return select_by_index(arms, [&](const ArmState& a) { return ucb_index(a, t, cfg); });
}

std::size_t moss_select(std::span<const ArmState> arms, std::uint64_t t,
                        const LearnerConfig& cfg) {
    return select_by_index(arms, [&](const ArmState& a) { return moss_index(a, t, cfg); });
}

EmpiricalCDF::EmpiricalCDF(std::vector<double> samples) : sorted_(std::move(samples)) {
    if (sorted_.empty()) throw std::invalid_argument("empirical CDF needs at least one sample");
    std::sort(sorted_.begin(), sorted_.end());
}

double EmpiricalCDF::operator()(double x) const {
    const auto below = std::lower_bound(sorted_.begin(), sorted_.end(), x) - sorted_.begin();
    return static_cast<double>(below) / static_cast<double>(sorted_.size());
}

void observe_threshold(ExploreExploitState& state, double theta) {
    state.observed_thresholds.push_back(theta);
}

double explore_exploit_action(std::uint64_t user, ExploreExploitState& state,
                              const LearnerConfig& cfg, const RewardModel& reward,
                              const ActionGrid& candidates) {
    if (user < 1) throw std::invalid_argument("users are numbered from 1");
    if (user <= static_cast<std::uint64_t>(cfg.explore_users)) return candidates.hi();
    if (state.committed_action) return *state.committed_action;
    if (state.observed_thresholds.empty())
        throw std::logic_error("exploit phase reached with no recorded thresholds");

    const EmpiricalCDF fhat(state.observed_thresholds);
    std::vector<double> xs = candidates.points();
    xs.insert(xs.end(), state.observed_thresholds.begin(), state.observed_thresholds.end());
    std::sort(xs.begin(), xs.end());

    double best = -std::numeric_limits<double>::infinity();
    double best_x = xs.front();
    for (double x : xs) {
        const double v = reward.mean(x) * fhat.survival(x);
        if (v > best) {
            best = v;
            best_x = x;
        }
    }
    state.committed_action = best_x;
    return best_x;
}

namespace {

class BanditLearner final : public PopulationLearner {
public:
    BanditLearner(const LearnerConfig& cfg, const ActionGrid& candidates) : cfg_(cfg) {
        for (double x : arm_actions(cfg.arm_count, candidates.lo(), candidates.hi()))
            arms_.push_back({x, 0, 0.0});
    }

    double choose_action(std::uint64_t user) override {
        last_ = cfg_.algorithm == Algorithm::ucb ? ucb_select(arms_, user, cfg_)
                                                 : moss_select(arms_, user, cfg_);
        return arms_[last_].action;
    }

    void observe(std::uint64_t, double, double payoff, double) override {
        record_payoff(arms_[last_], payoff);
    }

private:
    LearnerConfig cfg_;
    std::vector<ArmState> arms_;
    std::size_t last_ = 0;
};

class ExploreExploitLearner final : public PopulationLearner {
public:
    ExploreExploitLearner(const LearnerConfig& cfg, const RewardModel& reward,
                          const ActionGrid& candidates)
        : cfg_(cfg), reward_(reward), candidates_(candidates) {}

    double choose_action(std::uint64_t user) override {
        return explore_exploit_action(user, state_, cfg_, reward_, candidates_);
    }

    void observe(std::uint64_t user, double, double, double theta) override {
        if (user <= static_cast<std::uint64_t>(cfg_.explore_users))
            observe_threshold(state_, theta);
    }

private:
    LearnerConfig cfg_;
    RewardModel reward_;
    ActionGrid candidates_;
    ExploreExploitState state_;
};

class FixedActionLearner final : public PopulationLearner {
public:
    explicit FixedActionLearner(double x) : x_(x) {}
    double choose_action(std::uint64_t) override { return x_; }
    void observe(std::uint64_t, double, double, double) override {}

private:
    double x_;
};

}  // namespace

std::unique_ptr<PopulationLearner> make_learner(const LearnerConfig& cfg,
                                                const RewardModel& reward,
                                                const ActionGrid& candidates,
                                                double oracle_action) {
    switch (cfg.algorithm) {
        case Algorithm::ucb:
        case Algorithm::moss:
            return std::make_unique<BanditLearner>(cfg, candidates);
        case Algorithm::explore_exploit:
            return std::make_unique<ExploreExploitLearner>(cfg, reward, candidates);
        case Algorithm::oracle:
            return std::make_unique<FixedActionLearner>(oracle_action);
        case Algorithm::fixed:
            return std::make_unique<FixedActionLearner>(cfg.fixed_action);
    }
    throw std::invalid_argument("unknown learner algorithm");
}

}  // namespace abandon
