#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "abandon/csv_io.hpp"
#include "abandon/feedback_dp.hpp"
#include "abandon/harness.hpp"
#include "abandon/learners.hpp"
#include "abandon/solvers.hpp"
#include "abandon/svg_chart.hpp"

namespace {

using namespace abandon;

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::string part;
    std::stringstream ss(s);
    while (std::getline(ss, part, sep)) parts.push_back(part);
    return parts;
}

std::vector<double> parse_numbers(const std::string& flag, const std::string& s, char sep) {
    std::vector<double> out;
    for (const auto& part : split(s, sep)) {
        try {
            std::size_t used = 0;
            const double v = std::stod(part, &used);
            if (used != part.size()) throw std::invalid_argument(part);
            out.push_back(v);
        } catch (const std::exception&) {
            throw std::invalid_argument(flag + ": cannot parse number '" + part + "'");
        }
    }
    return out;
}

// Forms: uniform:LO,HI | power:K[,LO,HI] | table:PATH
ThresholdDist parse_dist(const std::string& spec) {
    const auto head = spec.substr(0, spec.find(':'));
    const auto rest = spec.find(':') == std::string::npos ? "" : spec.substr(spec.find(':') + 1);
    if (head == "uniform") {
        const auto v = parse_numbers("--dist", rest, ',');
        if (v.size() != 2) throw std::invalid_argument("--dist uniform needs LO,HI");
        return ThresholdDist::uniform(v[0], v[1]);
    }
    if (head == "power") {
        const auto v = parse_numbers("--dist", rest, ',');
        if (v.size() == 1) return ThresholdDist::power(v[0]);
        if (v.size() == 3) return ThresholdDist::power(v[0], v[1], v[2]);
        throw std::invalid_argument("--dist power needs K or K,LO,HI");
    }
    if (head == "table") {
        if (rest.empty()) throw std::invalid_argument("--dist table needs a file path");
        return ThresholdDist::tabulated_from_csv(rest);
    }
    throw std::invalid_argument("--dist: unknown distribution '" + head +
                                "' (expected uniform, power or table)");
}

// Forms: linear | const:C | table:PATH
RewardModel parse_reward(const std::string& spec, const ThresholdDist& dist, bool stochastic) {
    const auto head = spec.substr(0, spec.find(':'));
    const auto rest = spec.find(':') == std::string::npos ? "" : spec.substr(spec.find(':') + 1);
    RewardModel m = RewardModel::linear();
    if (head == "linear") {
        const double lo = std::max(0.0, dist.support_lo());
        m = RewardModel::linear(lo, dist.support_hi());
    } else if (head == "const") {
        const auto v = parse_numbers("--reward", rest, ',');
        if (v.size() != 1) throw std::invalid_argument("--reward const needs a single value");
        m = RewardModel::constant(v[0]);
    } else if (head == "table") {
        if (rest.empty()) throw std::invalid_argument("--reward table needs a file path");
        m = RewardModel::tabulated(csv::load_two_column_csv(rest));
    } else {
        throw std::invalid_argument("--reward: unknown reward '" + head +
                                    "' (expected linear, const or table)");
    }
    return stochastic ? m.with_bounded_noise() : m;
}

// Forms: none | uniform:HALF_WIDTH
NoiseModel parse_noise(const std::string& spec) {
    const auto head = spec.substr(0, spec.find(':'));
    const auto rest = spec.find(':') == std::string::npos ? "" : spec.substr(spec.find(':') + 1);
    if (head == "none") return NoiseModel::none();
    if (head == "uniform") {
        const auto v = parse_numbers("--noise", rest, ',');
        if (v.size() != 1) throw std::invalid_argument("--noise uniform needs a half-width");
        return NoiseModel::uniform(v[0]);
    }
    throw std::invalid_argument("--noise: unknown noise '" + head +
                                "' (expected none or uniform)");
}

void warn_svg_failure(const std::string& path, const std::exception& e) {
    std::cerr << "warning: could not write chart " << path << ": " << e.what() << '\n';
}

// ---------------------------------------------------------------- solve ----

struct SolveOpts {
    std::string model = "fixed";
    std::string dist = "uniform:0,1";
    std::string reward = "linear";
    double gamma = 0.9;
    int grid = 10001;
    std::string out;
};

int run_solve(const SolveOpts& o) {
    const ThresholdDist dist = parse_dist(o.dist);
    const RewardModel reward = parse_reward(o.reward, dist, false);
    const ActionGrid grid(dist.support_lo(), dist.support_hi(), o.grid);

    ConstantSolution s;
    if (o.model == "fixed") {
        s = solve_fixed(dist, reward, grid, o.gamma);
    } else if (o.model == "independent") {
        s = solve_independent(dist, reward, o.gamma, grid);
    } else {
        throw std::invalid_argument("--model must be fixed or independent");
    }

    std::cout << "model=" << o.model << " x_star=" << csv::format_double(s.x_star)
              << " objective=" << csv::format_double(s.objective)
              << " value=" << csv::format_double(s.value) << '\n';
    if (!o.out.empty()) {
        std::ofstream f(o.out);
        if (!f) throw std::runtime_error("cannot open output file: " + o.out);
        f << "model,x_star,objective,value\n"
          << o.model << ',' << csv::format_double(s.x_star) << ','
          << csv::format_double(s.objective) << ',' << csv::format_double(s.value) << '\n';
    }
    return 0;
}

// ------------------------------------------------------------------- dp ----

struct DpOpts {
    std::string dist = "uniform:0,1";
    std::string reward = "linear";
    double gamma = 0.9;
    double patience = -1.0;  // required, from --p or a config file
    int grid = 201;
    double tol = 1e-6;
    int threads = 0;
    std::string out;
    int tree_depth = 0;
    std::string tree_out = "policy_tree.csv";
    std::string first_action;  // P0:P1:STEPS
    std::string first_action_out = "first_action.csv";
    std::string svg;
};

std::string replace_extension(const std::string& path, const std::string& ext) {
    const auto dot = path.find_last_of('.');
    const auto slash = path.find_last_of('/');
    if (dot == std::string::npos || (slash != std::string::npos && dot < slash))
        return path + ext;
    return path.substr(0, dot) + ext;
}

void write_tree_chart(const std::string& path, const PolicyTree& tree) {
    std::map<std::string, const PolicyTreeNode*> by_path;
    for (const auto& n : tree.nodes) by_path[n.path] = &n;
    std::vector<svg::Segment> segments;
    for (const auto& n : tree.nodes) {
        if (n.path.empty()) continue;
        const auto parent = by_path.find(n.path.substr(0, n.path.size() - 1));
        if (parent == by_path.end()) continue;
        const bool survive = n.path.back() == 'S';
        segments.push_back({static_cast<double>(n.depth - 1), parent->second->action,
                            static_cast<double>(n.depth), n.action,
                            survive ? "#2ca02c" : "#d62728"});
    }
    svg::write_segment_chart(path, "Greedy policy unrolled (green survive, red crossing)",
                             "step", "action", segments);
}

int run_dp(const DpOpts& o) {
    if (o.patience < 0.0) {
        throw std::invalid_argument("dp needs --p (or p= in the config file)");
    }
    const ThresholdDist dist = parse_dist(o.dist);
    const RewardModel reward = parse_reward(o.reward, dist, false);
    const ActionGrid grid(dist.support_lo(), dist.support_hi(), o.grid);

    const IntervalValueTable table =
        feedback_dp(dist, reward, o.gamma, o.patience, grid, o.tol, o.threads);
    const int last = grid.size() - 1;
    std::cout << "p=" << csv::format_double(o.patience)
              << " root_value=" << csv::format_double(table.value(0, last))
              << " root_action=" << csv::format_double(grid.point(table.policy_at(0, last)))
              << " sweeps=" << table.iterations << '\n';

    if (!o.out.empty()) {
        std::ofstream f(o.out);
        if (!f) throw std::runtime_error("cannot open output file: " + o.out);
        write_csv(table, f);
    }

    if (o.tree_depth > 0) {
        const PolicyTree tree = extract_policy_tree(table, o.tree_depth);
        std::ofstream f(o.tree_out);
        if (!f) throw std::runtime_error("cannot open output file: " + o.tree_out);
        write_csv(tree, f);
        const std::string chart =
            o.svg.empty() ? replace_extension(o.tree_out, ".svg") : o.svg;
        try {
            write_tree_chart(chart, tree);
        } catch (const std::exception& e) {
            warn_svg_failure(chart, e);
        }
    }

    if (!o.first_action.empty()) {
        const auto spec = parse_numbers("--first-action", o.first_action, ':');
        if (spec.size() != 3 || spec[2] < 2 ||
            spec[2] != std::floor(spec[2]))
            throw std::invalid_argument("--first-action needs P0:P1:STEPS with STEPS >= 2");
        const int steps = static_cast<int>(spec[2]);
        std::vector<double> ps(static_cast<std::size_t>(steps));
        for (int i = 0; i < steps; ++i)
            ps[static_cast<std::size_t>(i)] = spec[0] + (spec[1] - spec[0]) * i / (steps - 1);
        const auto curve =
            first_action_curve(dist, reward, o.gamma, ps, grid, o.tol, o.threads);
        std::ofstream f(o.first_action_out);
        if (!f) throw std::runtime_error("cannot open output file: " + o.first_action_out);
        write_first_action_csv(curve, f);
        const std::string chart = (o.svg.empty() || o.tree_depth > 0)
                                      ? replace_extension(o.first_action_out, ".svg")
                                      : o.svg;
        try {
            svg::write_line_chart(chart, "First action vs patience", "patience p",
                                  "first action x0", {{"x0", curve}});
        } catch (const std::exception& e) {
            warn_svg_failure(chart, e);
        }
    }
    return 0;
}

// --------------------------------------------------------------- regret ----

struct RegretOpts {
    std::string algs = "ucb,moss,ee";
    std::string dist = "uniform:0,1";
    std::string reward = "linear";
    bool stochastic = false;
    double gamma = 0.9;
    int users = 2000;
    int reps = 50;
    int arm_count = 0;  // 0 = recipe based on n
    int explore_users = 110;
    double alpha = 2.5;
    double sigma = 0.5;
    std::uint64_t seed = 1;
    int grid = 10001;
    int threads = 0;
    std::string out = "regret";
    std::string svg;
};

Algorithm algorithm_from_name(const std::string& name) {
    if (name == "ucb") return Algorithm::ucb;
    if (name == "moss") return Algorithm::moss;
    if (name == "ee" || name == "explore-exploit") return Algorithm::explore_exploit;
    if (name == "oracle") return Algorithm::oracle;
    throw std::invalid_argument("--alg: unknown algorithm '" + name +
                                "' (expected ucb, moss, ee or oracle)");
}

int run_regret(const RegretOpts& o) {
    ExperimentConfig cfg;
    cfg.dist = parse_dist(o.dist);
    cfg.reward = parse_reward(o.reward, cfg.dist, o.stochastic);
    cfg.gamma = o.gamma;
    cfg.users = o.users;
    cfg.repetitions = o.reps;
    cfg.master_seed = o.seed;
    cfg.grid_size = o.grid;
    cfg.threads = o.threads;
    cfg.learner.arm_count = o.arm_count > 0
                                ? o.arm_count
                                : discretization_arm_count(
                                      static_cast<std::uint64_t>(std::max(2, o.users)));
    cfg.learner.alpha = o.alpha;
    cfg.learner.sigma = o.sigma;
    cfg.learner.explore_users = o.explore_users;

    std::vector<svg::Series> series;
    for (const auto& name : split(o.algs, ',')) {
        cfg.learner.algorithm = algorithm_from_name(name);
        const auto records = run_regret_experiment(cfg);

        const std::string path = o.out + "_" + name + ".csv";
        std::ofstream f(path);
        if (!f) throw std::runtime_error("cannot open output file: " + path);
        write_csv(records, f);

        double sum = 0.0, sum_sq = 0.0;
        const auto n = static_cast<std::size_t>(cfg.users);
        for (int rep = 0; rep < cfg.repetitions; ++rep) {
            const double final_regret = records[static_cast<std::size_t>(rep) * n + n - 1].cum_regret;
            sum += final_regret;
            sum_sq += final_regret * final_regret;

            std::vector<std::pair<double, double>> run_points;
            run_points.reserve(n);
            for (std::size_t u = 0; u < n; ++u) {
                const auto& rec = records[static_cast<std::size_t>(rep) * n + u];
                run_points.emplace_back(rec.user, rec.cum_regret);
            }
            series.push_back({name, svg::thin_points(run_points, 400)});
        }
        const double mean = sum / cfg.repetitions;
        const double var = std::max(0.0, sum_sq / cfg.repetitions - mean * mean);
        std::cout << "alg=" << name << " K=" << cfg.learner.arm_count
                  << " mean_final_regret=" << csv::format_double(mean)
                  << " se=" << csv::format_double(std::sqrt(var / cfg.repetitions))
                  << " csv=" << path << '\n';
    }

    const std::string chart = o.svg.empty() ? o.out + "_regret.svg" : o.svg;
    try {
        svg::write_line_chart(chart, "Cumulative regret", "user", "cumulative regret", series);
    } catch (const std::exception& e) {
        warn_svg_failure(chart, e);
    }
    return 0;
}

// ----------------------------------------------------------- robustness ----

struct SmallNoiseOpts {
    std::string dist = "uniform:0,1";
    std::string reward = "linear";
    double gamma = 0.9;
    double y = 0.05;
    int grid = 10001;
    long mc_reps = 100000;
    std::uint64_t seed = 1;
    std::string out;
};

struct LargeNoiseOpts {
    std::string dist = "uniform:0.4,0.6";
    std::string reward = "linear";
    std::string noise = "uniform:1";
    std::string cover;  // L,U,ETA; defaults to the support with eta = 0
    double gamma = 0.9;
    int grid = 1001;
    std::string out;
};

void print_report(const RobustnessReport& r) {
    std::cout << "mode=" << r.mode << " policy_action=" << csv::format_double(r.policy_action)
              << " policy_value=" << csv::format_double(r.policy_value)
              << " half_width=" << csv::format_double(r.half_width)
              << " comparison=" << csv::format_double(r.comparison)
              << " gap=" << csv::format_double(r.gap)
              << " bound=" << csv::format_double(r.bound)
              << " satisfied=" << (r.satisfied ? "true" : "false");
    if (r.mode == "small-noise" && r.clamped) std::cout << " clamped=true";
    if (r.mode == "large-noise") std::cout << " lipschitz_v=" << csv::format_double(r.lipschitz_v);
    std::cout << '\n';
}

void save_report(const RobustnessReport& r, const std::string& path) {
    if (path.empty()) return;
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot open output file: " + path);
    write_csv(r, f);
}

int run_small(const SmallNoiseOpts& o) {
    const ThresholdDist dist = parse_dist(o.dist);
    const RewardModel reward = parse_reward(o.reward, dist, false);
    const ActionGrid grid(dist.support_lo(), dist.support_hi(), o.grid);
    const RobustnessReport report =
        small_noise_experiment(dist, reward, o.gamma, o.y, grid, o.mc_reps, o.seed);
    if (report.clamped)
        std::cerr << "warning: shifted action fell below the support and was clamped\n";
    print_report(report);
    save_report(report, o.out);
    return 0;
}

int run_large(const LargeNoiseOpts& o) {
    const ThresholdDist dist = parse_dist(o.dist);
    const RewardModel reward = parse_reward(o.reward, dist, false);
    const NoiseModel noise = parse_noise(o.noise);
    const ActionGrid grid(dist.support_lo(), dist.support_hi(), o.grid);

    EtaCover cover{dist.support_lo(), dist.support_hi(), 0.0};
    if (!o.cover.empty()) {
        const auto v = parse_numbers("--cover", o.cover, ',');
        if (v.size() != 3) throw std::invalid_argument("--cover needs L,U,ETA");
        cover = {v[0], v[1], v[2]};
    }

    const RobustnessReport report =
        large_noise_experiment(dist, noise, reward, o.gamma, cover, grid);
    print_report(report);
    save_report(report, o.out);
    return 0;
}

// CLI11 only auto-loads config files registered on the top-level command, so
// each subcommand's --config is applied here after the regular parse. Keys are
// skipped for options the command line already set, which gives flags
// precedence over the file.
void apply_config_file(CLI::App& sub) {
    const CLI::Option* opt = sub.get_config_ptr();
    if (opt == nullptr || opt->count() == 0) return;
    const auto path = opt->as<std::string>();
    std::ifstream in(path);
    if (!in) throw CLI::FileError::Missing(path);
    sub.parse_from_stream(in);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Solver and simulation toolkit for learning-with-abandonment models"};
    app.require_subcommand(1);

    const std::string dist_help = "Threshold distribution: uniform:LO,HI | power:K[,LO,HI] | table:PATH";
    const std::string reward_help = "Reward model: linear | const:C | table:PATH";

    SolveOpts so;
    auto* solve = app.add_subcommand("solve", "Best constant action in closed form");
    solve->set_config("--config", "", "Read options from a key=value file");
    solve->allow_config_extras(false);
    solve->add_option("--model", so.model, "Threshold model: fixed | independent")
        ->capture_default_str();
    solve->add_option("--dist", so.dist, dist_help)->capture_default_str();
    solve->add_option("--reward", so.reward, reward_help)->capture_default_str();
    solve->add_option("--gamma", so.gamma, "Discount factor")->capture_default_str();
    solve->add_option("--grid", so.grid, "Action grid size")->capture_default_str();
    solve->add_option("--out", so.out, "Write the solution as CSV");

    DpOpts dpo;
    auto* dp = app.add_subcommand("dp", "Posterior-interval dynamic program with feedback");
    dp->set_config("--config", "", "Read options from a key=value file");
    dp->allow_config_extras(false);
    dp->add_option("--dist", dpo.dist, dist_help)->capture_default_str();
    dp->add_option("--reward", dpo.reward, reward_help)->capture_default_str();
    dp->add_option("--gamma", dpo.gamma, "Discount factor")->capture_default_str();
    dp->add_option("--p", dpo.patience, "Patience: chance the user survives a crossing");
    dp->add_option("--grid", dpo.grid, "Action grid size")->capture_default_str();
    dp->add_option("--tol", dpo.tol, "Value iteration tolerance")->capture_default_str();
    dp->add_option("--threads", dpo.threads, "Worker threads (0 = hardware)")
        ->capture_default_str();
    dp->add_option("--out", dpo.out, "Write the value table as CSV");
    dp->add_option("--tree", dpo.tree_depth, "Unroll the greedy policy to this depth");
    dp->add_option("--tree-out", dpo.tree_out, "Policy tree CSV path")->capture_default_str();
    dp->add_option("--first-action", dpo.first_action,
                   "Sweep patience P0:P1:STEPS and record the root action");
    dp->add_option("--first-action-out", dpo.first_action_out, "First-action CSV path")
        ->capture_default_str();
    dp->add_option("--svg", dpo.svg, "Chart output path (tree chart when --tree is set)");

    RegretOpts ro;
    auto* regret = app.add_subcommand("regret", "Sequential learning over a user population");
    regret->set_config("--config", "", "Read options from a key=value file");
    regret->allow_config_extras(false);
    regret->add_option("--alg", ro.algs, "Comma list of ucb, moss, ee, oracle")
        ->capture_default_str();
    regret->add_option("--dist", ro.dist, dist_help)->capture_default_str();
    regret->add_option("--reward", ro.reward, reward_help)->capture_default_str();
    regret->add_flag("--stochastic-rewards", ro.stochastic,
                     "Draw bounded noisy rewards instead of deterministic ones");
    regret->add_option("--gamma", ro.gamma, "Discount factor")->capture_default_str();
    regret->add_option("--n", ro.users, "Users per repetition")->capture_default_str();
    regret->add_option("--reps", ro.reps, "Independent repetitions")->capture_default_str();
    regret->add_option("--K", ro.arm_count, "Bandit arm count (0 = recipe from n)")
        ->capture_default_str();
    regret->add_option("--m", ro.explore_users, "Explore-exploit probe users")
        ->capture_default_str();
    regret->add_option("--alpha", ro.alpha, "UCB exploration parameter")->capture_default_str();
    regret->add_option("--sigma", ro.sigma, "UCB sub-Gaussian scale")->capture_default_str();
    regret->add_option("--seed", ro.seed, "Master seed")->capture_default_str();
    regret->add_option("--grid", ro.grid, "Oracle / candidate grid size")->capture_default_str();
    regret->add_option("--threads", ro.threads, "Worker threads (0 = hardware)")
        ->capture_default_str();
    regret->add_option("--out", ro.out, "Output prefix for per-algorithm CSVs")
        ->capture_default_str();
    regret->add_option("--svg", ro.svg, "Regret chart path (default PREFIX_regret.svg)");

    auto* robustness = app.add_subcommand("robustness", "Noise robustness experiments");
    robustness->require_subcommand(1);

    SmallNoiseOpts smo;
    auto* small = robustness->add_subcommand(
        "small", "Additive threshold noise met by a shifted constant action");
    small->set_config("--config", "", "Read options from a key=value file");
    small->allow_config_extras(false);
    small->add_option("--dist", smo.dist, dist_help)->capture_default_str();
    small->add_option("--reward", smo.reward, reward_help)->capture_default_str();
    small->add_option("--gamma", smo.gamma, "Discount factor")->capture_default_str();
    small->add_option("--y", smo.y, "Noise half-width")->capture_default_str();
    small->add_option("--grid", smo.grid, "Action grid size")->capture_default_str();
    small->add_option("--mc-reps", smo.mc_reps, "Monte Carlo episodes")->capture_default_str();
    small->add_option("--seed", smo.seed, "Monte Carlo seed")->capture_default_str();
    small->add_option("--out", smo.out, "Write the report as CSV");

    LargeNoiseOpts lno;
    auto* large = robustness->add_subcommand(
        "large", "Noise wide relative to the threshold spread; committed midpoint policy");
    large->set_config("--config", "", "Read options from a key=value file");
    large->allow_config_extras(false);
    large->add_option("--dist", lno.dist, dist_help)->capture_default_str();
    large->add_option("--reward", lno.reward, reward_help)->capture_default_str();
    large->add_option("--noise", lno.noise, "Step noise: none | uniform:HALF_WIDTH")
        ->capture_default_str();
    large->add_option("--cover", lno.cover,
                      "Threshold cover L,U,ETA holding mass at least 1 - ETA");
    large->add_option("--gamma", lno.gamma, "Discount factor")->capture_default_str();
    large->add_option("--grid", lno.grid, "Action grid size")->capture_default_str();
    large->add_option("--out", lno.out, "Write the report as CSV");

    try {
        app.parse(argc, argv);
        for (CLI::App* sub : {solve, dp, regret, small, large}) {
            apply_config_file(*sub);
        }
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (solve->parsed()) return run_solve(so);
        if (dp->parsed()) return run_dp(dpo);
        if (regret->parsed()) return run_regret(ro);
        if (robustness->parsed()) {
            if (small->parsed()) return run_small(smo);
            if (large->parsed()) return run_large(lno);
        }
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
}
