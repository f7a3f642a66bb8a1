#include <cmath>
#include <sstream>
#include <vector>

#include "doctest.h"

#include "abandon/harness.hpp"

using namespace abandon;

namespace {

ExperimentConfig small_experiment(Algorithm alg) {
    ExperimentConfig cfg;
    cfg.users = 400;
    cfg.repetitions = 8;
    cfg.master_seed = 99;
    cfg.grid_size = 2001;
    cfg.learner.algorithm = alg;
    cfg.learner.arm_count = 6;
    cfg.learner.explore_users = 40;
    return cfg;
}

double final_regret(const std::vector<RegretRecord>& records, int rep, int users) {
    return records[static_cast<std::size_t>(rep) * static_cast<std::size_t>(users) +
                   static_cast<std::size_t>(users) - 1]
        .cum_regret;
}

}  // namespace

TEST_CASE("oracle benchmark pins the known optima") {
    const ActionGrid grid(0.0, 1.0, 10001);
    const auto [x_u, v_u] =
        oracle_benchmark(ThresholdDist::uniform(0.0, 1.0), RewardModel::linear(), grid);
    CHECK(x_u == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(v_u == doctest::Approx(0.25).epsilon(1e-12));

    const auto [x_p, v_p] =
        oracle_benchmark(ThresholdDist::power(2.0), RewardModel::linear(), grid);
    CHECK(x_p == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-3));
    CHECK(v_p == doctest::Approx(2.0 / (3.0 * std::sqrt(3.0))).epsilon(1e-6));

    const auto [x_c, v_c] =
        oracle_benchmark(ThresholdDist::uniform(0.0, 1.0), RewardModel::constant(1.0), grid);
    CHECK(x_c == 0.0);
    CHECK(v_c == 1.0);
}

TEST_CASE("the oracle learner keeps regret at statistical zero") {
    auto cfg = small_experiment(Algorithm::oracle);
    const auto records = run_regret_experiment(cfg);
    REQUIRE(records.size() ==
            static_cast<std::size_t>(cfg.users) * static_cast<std::size_t>(cfg.repetitions));

    double sum = 0.0;
    for (int rep = 0; rep < cfg.repetitions; ++rep) sum += final_regret(records, rep, cfg.users);
    const double mean = sum / cfg.repetitions;
    // Per-user payoff variance is at most 1/4, so across 8 x 400 users a
    // band of 1.5 covers far more than three standard errors.
    CHECK(std::abs(mean) < 1.5);
}

TEST_CASE("an always-crossing action forfeits exactly the oracle rate") {
    ExperimentConfig cfg;
    cfg.users = 1;
    cfg.repetitions = 5;
    cfg.master_seed = 3;
    cfg.grid_size = 101;
    cfg.learner.algorithm = Algorithm::fixed;
    cfg.learner.fixed_action = 1.0;  // crosses every threshold almost surely

    const auto records = run_regret_experiment(cfg);
    REQUIRE(records.size() == 5);
    for (const auto& rec : records) {
        CHECK(rec.payoff == 0.0);
        CHECK(rec.cum_regret == doctest::Approx(0.25).epsilon(1e-12));
    }
}

TEST_CASE("regret records accumulate consistently") {
    auto cfg = small_experiment(Algorithm::ucb);
    const auto records = run_regret_experiment(cfg);
    const ActionGrid grid(0.0, 1.0, cfg.grid_size);
    const auto [x_star, per_user] = oracle_benchmark(cfg.dist, cfg.reward, grid);

    for (int rep = 0; rep < cfg.repetitions; ++rep) {
        double collected = 0.0;
        for (int user = 1; user <= cfg.users; ++user) {
            const auto& rec =
                records[static_cast<std::size_t>(rep) * static_cast<std::size_t>(cfg.users) +
                        static_cast<std::size_t>(user - 1)];
            CHECK(rec.rep == rep);
            CHECK(rec.user == user);
            CHECK(rec.payoff >= 0.0);
            collected += rec.payoff;
            CHECK(rec.cum_regret ==
                  doctest::Approx(user * per_user - collected).epsilon(1e-9));
        }
    }
}

TEST_CASE("experiments are reproducible and thread-count invariant") {
    auto cfg = small_experiment(Algorithm::moss);
    cfg.threads = 1;
    const auto one = run_regret_experiment(cfg);
    cfg.threads = 3;
    const auto three = run_regret_experiment(cfg);
    const auto again = run_regret_experiment(cfg);

    REQUIRE(one.size() == three.size());
    for (std::size_t i = 0; i < one.size(); ++i) {
        CHECK(one[i].action == three[i].action);
        CHECK(one[i].payoff == three[i].payoff);
        CHECK(one[i].cum_regret == three[i].cum_regret);
        CHECK(three[i].cum_regret == again[i].cum_regret);
    }
}

TEST_CASE("regret CSV output is stable across runs") {
    auto cfg = small_experiment(Algorithm::explore_exploit);
    cfg.users = 120;
    cfg.repetitions = 2;
    std::ostringstream a, b;
    write_csv(run_regret_experiment(cfg), a);
    write_csv(run_regret_experiment(cfg), b);
    CHECK(a.str() == b.str());
    CHECK(a.str().rfind("rep,user,action,payoff,cum_regret\n", 0) == 0);
}

TEST_CASE("stochastic rewards keep the experiment consistent") {
    auto cfg = small_experiment(Algorithm::ucb);
    cfg.users = 200;
    cfg.repetitions = 4;
    cfg.reward = RewardModel::linear().with_bounded_noise();
    const auto records = run_regret_experiment(cfg);
    for (const auto& rec : records) {
        CHECK(rec.payoff >= 0.0);
        CHECK(rec.payoff <= cfg.reward.max_step());
    }
}

TEST_CASE("learning beats never learning on the standard population") {
    auto ee = small_experiment(Algorithm::explore_exploit);
    ee.users = 1000;
    ee.repetitions = 10;
    const auto records = run_regret_experiment(ee);

    auto bad = small_experiment(Algorithm::fixed);
    bad.users = 1000;
    bad.repetitions = 10;
    bad.learner.fixed_action = 0.95;  // survives only 5% of users
    const auto bad_records = run_regret_experiment(bad);

    double ee_sum = 0.0, bad_sum = 0.0;
    for (int rep = 0; rep < 10; ++rep) {
        ee_sum += final_regret(records, rep, 1000);
        bad_sum += final_regret(bad_records, rep, 1000);
    }
    CHECK(ee_sum / 10.0 < bad_sum / 10.0);
}

TEST_CASE("experiment configs validate") {
    ExperimentConfig cfg;
    cfg.users = 0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = ExperimentConfig{};
    cfg.gamma = 1.0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = ExperimentConfig{};
    cfg.learner.algorithm = Algorithm::explore_exploit;
    cfg.learner.explore_users = cfg.users;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

TEST_CASE("zero noise makes the small-noise experiment a consistency check") {
    const auto dist = ThresholdDist::uniform(0.0, 1.0);
    const auto reward = RewardModel::linear();
    const ActionGrid grid(0.0, 1.0, 2001);
    const auto report = small_noise_experiment(dist, reward, 0.9, 0.0, grid, 20000, 7);

    CHECK(report.mode == "small-noise");
    CHECK(report.policy_action == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(report.bound == 0.0);
    CHECK_FALSE(report.clamped);
    CHECK(report.satisfied);
    CHECK(std::abs(report.gap) <= report.half_width);
    CHECK(report.policy_value == doctest::Approx(2.5).epsilon(0.03));
}

TEST_CASE("small noise keeps the shifted policy within its bound") {
    const auto dist = ThresholdDist::uniform(0.0, 1.0);
    const auto reward = RewardModel::linear();
    const ActionGrid grid(0.0, 1.0, 2001);
    const auto report = small_noise_experiment(dist, reward, 0.9, 0.05, grid, 30000, 7);

    CHECK(report.policy_action == doctest::Approx(0.45).epsilon(1e-12));
    // max_x (x + 0.05)(1 - x) / 0.1 peaks at x = 0.475
    CHECK(report.comparison == doctest::Approx(0.275625 / 0.1).epsilon(1e-6));
    CHECK(report.bound == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(report.gap > 0.0);
    CHECK(report.satisfied);
    CHECK_FALSE(report.clamped);
}

TEST_CASE("oversized shifts clamp to the support and say so") {
    const auto dist = ThresholdDist::uniform(0.0, 1.0);
    const auto reward = RewardModel::linear();
    const ActionGrid grid(0.0, 1.0, 501);
    const auto report = small_noise_experiment(dist, reward, 0.9, 0.6, grid, 2000, 7);
    CHECK(report.clamped);
    CHECK(report.policy_action == 0.0);
}

TEST_CASE("large noise: committing to the midpoint is near-oracle") {
    const auto dist = ThresholdDist::uniform(0.4, 0.6);
    const auto reward = RewardModel::linear(0.4, 0.6);
    const auto noise = NoiseModel::uniform(1.0);
    const ActionGrid grid(0.4, 0.6, 1001);
    const auto report =
        large_noise_experiment(dist, noise, reward, 0.9, {0.4, 0.6, 0.0}, grid);

    CHECK(report.mode == "large-noise");
    // Optimal action for the midpoint threshold solves 0.9 x^2 + 1.3 x = 0.975.
    const double x_bar = (-1.3 + std::sqrt(1.69 + 4.0 * 0.9 * 0.975)) / 1.8;
    CHECK(std::abs(report.policy_action - x_bar) < 2.0 * grid.spacing());
    CHECK(report.gap >= -1e-9);  // the oracle can only be better
    CHECK(report.satisfied);
    CHECK(report.half_width == 0.0);
    CHECK(report.lipschitz_v > 0.0);
}

TEST_CASE("a point-mass population makes the midpoint policy exactly oracle") {
    const auto dist = ThresholdDist::uniform(0.5 - 1e-9, 0.5 + 1e-9);
    const auto reward = RewardModel::linear(0.0, 1.0);
    const auto noise = NoiseModel::uniform(1.0);
    const ActionGrid grid(0.0, 1.0, 501);
    const auto report = large_noise_experiment(dist, noise, reward, 0.9,
                                               {0.5 - 1e-9, 0.5 + 1e-9, 0.0}, grid);
    CHECK(std::abs(report.gap) < 1e-9);
    CHECK(report.satisfied);
}

TEST_CASE("cover intervals must actually cover") {
    const auto dist = ThresholdDist::uniform(0.4, 0.6);
    const auto reward = RewardModel::linear(0.4, 0.6);
    const auto noise = NoiseModel::uniform(1.0);
    const ActionGrid grid(0.4, 0.6, 101);

    CHECK_THROWS_AS(
        large_noise_experiment(dist, noise, reward, 0.9, {0.45, 0.55, 0.0}, grid),
        std::invalid_argument);
    CHECK_NOTHROW(
        large_noise_experiment(dist, noise, reward, 0.9, {0.45, 0.55, 0.5}, grid));
    CHECK_THROWS_AS(large_noise_experiment(dist, noise, reward, 0.9, {0.5, 0.5, 0.0}, grid),
                    std::invalid_argument);
}

TEST_CASE("robustness CSV carries the full report") {
    const auto dist = ThresholdDist::uniform(0.0, 1.0);
    const auto reward = RewardModel::linear();
    const ActionGrid grid(0.0, 1.0, 501);
    const auto report = small_noise_experiment(dist, reward, 0.9, 0.05, grid, 2000, 7);

    std::ostringstream out;
    write_csv(report, out);
    const std::string text = out.str();
    CHECK(text.rfind("mode,policy_action,policy_value,half_width,comparison,gap,bound,"
                     "satisfied\n",
                     0) == 0);
    CHECK(text.find("small-noise") != std::string::npos);
    CHECK(text.find("true") != std::string::npos);
}
