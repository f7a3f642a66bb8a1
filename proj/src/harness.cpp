#include "abandon/harness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <thread>

#include "abandon/csv_io.hpp"
#include "abandon/episode.hpp"
#include "abandon/solvers.hpp"

namespace abandon {

std::pair<double, double> oracle_benchmark(const ThresholdDist& dist, const RewardModel& reward,
                                           const ActionGrid& grid) {
    const ConstantSolution s = solve_fixed(dist, reward, grid);
    return {s.x_star, s.objective};
}

void ExperimentConfig::validate() const {
    if (users < 1) throw std::invalid_argument("experiment needs at least one user");
    if (repetitions < 1) throw std::invalid_argument("experiment needs at least one repetition");
    if (!(gamma > 0.0 && gamma < 1.0))
        throw std::invalid_argument("discount factor must lie in (0, 1)");
    if (!(trunc_tol > 0.0)) throw std::invalid_argument("truncation tolerance must be positive");
    if (grid_size < 2) throw std::invalid_argument("experiment grid needs at least two points");
    learner.validate(static_cast<std::uint64_t>(users));
}

namespace {

int resolve_threads(int threads, int cap) {
    int n = threads;
    if (n <= 0) {
        const unsigned hw = std::thread::hardware_concurrency();
        n = hw == 0 ? 1 : static_cast<int>(hw);
    }
    return std::clamp(n, 1, cap);
}

// Normalized payoff of one user with threshold theta under constant action
// x. Deterministic rewards admit the closed form r(x) on tolerance and 0 on
// a crossing; stochastic rewards are measured by simulating the episode.
double user_payoff(double x, double theta, const ExperimentConfig& cfg, RngStream& rng) {
    if (cfg.reward.noise_kind() == RewardModel::NoiseKind::deterministic)
        return x <= theta ? cfg.reward.mean(x) : 0.0;
    ConstantPolicy policy(x);
    EpisodeConfig ecfg;
    ecfg.gamma = cfg.gamma;
    ecfg.patience = 0.0;
    ecfg.trunc_tol = cfg.trunc_tol;
    ecfg.action_lo = cfg.dist.support_lo();
    ecfg.action_hi = cfg.dist.support_hi();
    return simulate_episode(policy, ThetaProcess::fixed_theta(theta), cfg.reward, ecfg, rng)
        .normalized_reward;
}

}  // namespace

std::vector<RegretRecord> run_regret_experiment(const ExperimentConfig& cfg) {
    cfg.validate();
    const ActionGrid candidates(cfg.dist.support_lo(), cfg.dist.support_hi(), cfg.grid_size);
    const auto [x_star, per_user] = oracle_benchmark(cfg.dist, cfg.reward, candidates);

    const auto n = static_cast<std::size_t>(cfg.users);
    std::vector<RegretRecord> records(static_cast<std::size_t>(cfg.repetitions) * n);
    const RngStream master(cfg.master_seed);

    auto run_rep = [&](int rep) {
        const RngStream rep_stream = master.child(static_cast<std::uint64_t>(rep));
        const auto learner = make_learner(cfg.learner, cfg.reward, candidates, x_star);
        double collected = 0.0;
        for (int user = 1; user <= cfg.users; ++user) {
            RngStream user_stream = rep_stream.child(static_cast<std::uint64_t>(user));
            const double theta = cfg.dist.sample(user_stream);
            const double x = learner->choose_action(static_cast<std::uint64_t>(user));
            const double payoff = user_payoff(x, theta, cfg, user_stream);
            learner->observe(static_cast<std::uint64_t>(user), x, payoff, theta);
            collected += payoff;
            records[static_cast<std::size_t>(rep) * n + static_cast<std::size_t>(user - 1)] = {
                rep, user, x, payoff, static_cast<double>(user) * per_user - collected};
        }
    };

    const int nthreads = resolve_threads(cfg.threads, cfg.repetitions);
    if (nthreads <= 1) {
        for (int rep = 0; rep < cfg.repetitions; ++rep) run_rep(rep);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(nthreads));
        for (int t = 0; t < nthreads; ++t)
            pool.emplace_back([&, t] {
                for (int rep = t; rep < cfg.repetitions; rep += nthreads) run_rep(rep);
            });
        for (auto& th : pool) th.join();
    }
    return records;
}

RobustnessReport small_noise_experiment(const ThresholdDist& dist, const RewardModel& reward,
                                        double gamma, double noise_half_width,
                                        const ActionGrid& grid, long mc_episodes,
                                        std::uint64_t seed) {
    if (!(gamma > 0.0 && gamma < 1.0))
        throw std::invalid_argument("discount factor must lie in (0, 1)");
    if (noise_half_width < 0.0)
        throw std::invalid_argument("noise half-width must be nonnegative");
    if (mc_episodes < 1) throw std::invalid_argument("need at least one Monte Carlo episode");

    const ConstantSolution base = solve_fixed(dist, reward, grid, gamma);
    const double y = noise_half_width;

    RobustnessReport report;
    report.mode = "small-noise";
    report.policy_action = base.x_star - y;
    if (report.policy_action < dist.support_lo()) {
        report.policy_action = dist.support_lo();
        report.clamped = true;
    }

    const NoiseModel noise = y > 0.0 ? NoiseModel::uniform(y) : NoiseModel::none();
    const RngStream root(seed);
    double sum = 0.0, sum_sq = 0.0;
    for (long e = 0; e < mc_episodes; ++e) {
        RngStream stream = root.child(static_cast<std::uint64_t>(e));
        const double theta = dist.sample(stream);
        ConstantPolicy policy(report.policy_action);
        const ThetaProcess process = y > 0.0 ? ThetaProcess::fixed_plus_noise(theta, noise)
                                             : ThetaProcess::fixed_theta(theta);
        EpisodeConfig ecfg;
        ecfg.gamma = gamma;
        ecfg.patience = 0.0;
        ecfg.action_lo = dist.support_lo();
        ecfg.action_hi = dist.support_hi();
        const double v = simulate_episode(policy, process, reward, ecfg, stream).discounted_reward;
        sum += v;
        sum_sq += v * v;
    }
    const double mean = sum / static_cast<double>(mc_episodes);
    const double var =
        std::max(0.0, sum_sq / static_cast<double>(mc_episodes) - mean * mean);
    report.policy_value = mean;
    report.half_width = 3.0 * std::sqrt(var / static_cast<double>(mc_episodes));

    // Best case under the perturbation: the threshold effectively shifts by
    // at most y, so no policy beats max_x r(x + y)(1 - F(x)) / (1 - gamma).
    double best = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < grid.size(); ++i) {
        const double x = grid.point(i);
        best = std::max(best, reward.mean(x + y) * dist.survival(x));
    }
    report.comparison = best / (1.0 - gamma);
    report.gap = report.comparison - report.policy_value;
    report.bound = 2.0 * y * reward.lipschitz() / (1.0 - gamma);
    report.satisfied = report.gap <= report.bound + report.half_width;
    return report;
}

RobustnessReport large_noise_experiment(const ThresholdDist& dist, const NoiseModel& noise,
                                        const RewardModel& reward, double gamma,
                                        const EtaCover& cover, const ActionGrid& grid) {
    if (!(gamma > 0.0 && gamma < 1.0))
        throw std::invalid_argument("discount factor must lie in (0, 1)");
    if (!(cover.upper > cover.lower))
        throw std::invalid_argument("cover interval must have positive width");
    if (!(cover.eta >= 0.0 && cover.eta <= 1.0))
        throw std::invalid_argument("cover tail mass must lie in [0, 1]");
    const double mass = dist.cdf(cover.upper) - dist.cdf(cover.lower);
    if (mass < 1.0 - cover.eta - 1e-9)
        throw std::invalid_argument(
            "cover interval holds less threshold mass than 1 - eta promises");

    const double width = cover.upper - cover.lower;
    const double theta_bar = 0.5 * (cover.lower + cover.upper);
    const double x_bar = noisy_oracle_policy(theta_bar, noise, reward, gamma, grid);

    RobustnessReport report;
    report.mode = "large-noise";
    report.policy_action = x_bar;

    // E over theta* of v(theta*, theta*) and of v(theta_bar, theta*), by
    // midpoint quadrature in quantile space.
    constexpr int kNodes = 4001;
    double v_oracle = 0.0, v_committed = 0.0;
    for (int e = 0; e < kNodes; ++e) {
        const double q = (static_cast<double>(e) + 0.5) / kNodes;
        const double theta = dist.quantile(q);
        const double x_theta = noisy_oracle_policy(theta, noise, reward, gamma, grid);
        v_oracle += noisy_constant_value(x_theta, theta, noise, reward, gamma);
        v_committed += noisy_constant_value(x_bar, theta, noise, reward, gamma);
    }
    v_oracle /= kNodes;
    v_committed /= kNodes;
    report.policy_value = v_committed;
    report.comparison = v_oracle;
    report.gap = v_oracle - v_committed;

    // Numerical Lipschitz constant of v(theta, theta') in its first
    // argument over the cover, by central differences on a scan grid.
    constexpr int kScanTheta = 201;
    constexpr int kScanOther = 101;
    const double h = width / (kScanTheta - 1);
    std::vector<double> x_of_theta(kScanTheta);
    for (int a = 0; a < kScanTheta; ++a)
        x_of_theta[static_cast<std::size_t>(a)] =
            noisy_oracle_policy(cover.lower + a * h, noise, reward, gamma, grid);
    double lv = 0.0;
    for (int a = 1; a + 1 < kScanTheta; ++a) {
        for (int b = 0; b < kScanOther; ++b) {
            const double other = cover.lower + width * static_cast<double>(b) / (kScanOther - 1);
            const double hi = noisy_constant_value(x_of_theta[static_cast<std::size_t>(a + 1)],
                                                   other, noise, reward, gamma);
            const double lo = noisy_constant_value(x_of_theta[static_cast<std::size_t>(a - 1)],
                                                   other, noise, reward, gamma);
            lv = std::max(lv, std::abs(hi - lo) / (2.0 * h));
        }
    }
    report.lipschitz_v = lv;
    report.bound = lv * width / 2.0 + 2.0 * cover.eta * reward.bound() / (1.0 - gamma);
    report.satisfied = report.gap <= report.bound + report.half_width;
    return report;
}

void write_csv(const std::vector<RegretRecord>& records, std::ostream& out) {
    out << "rep,user,action,payoff,cum_regret\n";
    for (const auto& rec : records)
        out << rec.rep << ',' << rec.user << ',' << csv::format_double(rec.action) << ','
            << csv::format_double(rec.payoff) << ',' << csv::format_double(rec.cum_regret)
            << '\n';
}

void write_csv(const RobustnessReport& report, std::ostream& out) {
    out << "mode,policy_action,policy_value,half_width,comparison,gap,bound,satisfied\n";
    out << report.mode << ',' << csv::format_double(report.policy_action) << ','
        << csv::format_double(report.policy_value) << ','
        << csv::format_double(report.half_width) << ','
        << csv::format_double(report.comparison) << ',' << csv::format_double(report.gap)
        << ',' << csv::format_double(report.bound) << ','
        << (report.satisfied ? "true" : "false") << '\n';
}

}  // namespace abandon
