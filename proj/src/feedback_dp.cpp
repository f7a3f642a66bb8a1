#include "abandon/feedback_dp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <thread>
#include <utility>

#include "abandon/csv_io.hpp"
#include "abandon/solvers.hpp"

namespace abandon {

namespace {

int resolve_threads(int threads) {
    if (threads > 0) return threads;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

}  // namespace

IntervalValueTable feedback_dp(const ThresholdDist& dist, const RewardModel& reward,
                               double gamma, double patience, const ActionGrid& grid,
                               double tol, int threads) {
    if (!(gamma >= 0.0 && gamma < 1.0))
        throw std::invalid_argument("discount factor must lie in [0, 1)");
    if (!(patience >= 0.0 && patience <= 1.0))
        throw std::invalid_argument("patience must lie in [0, 1]");
    if (!(tol > 0.0)) throw std::invalid_argument("tolerance must be positive");
    if (grid.size() < 3)
        throw std::invalid_argument("interval DP needs at least three grid points");

    const int n = grid.size();
    IntervalValueTable table{grid, gamma, patience, {}, {}, {}, {}, 0};
    const std::size_t states = static_cast<std::size_t>(n) * (static_cast<std::size_t>(n) - 1) / 2;
    table.values.assign(states, 0.0);
    table.policy.assign(states, 0);
    table.degenerate.assign(states, 0);

    std::vector<double> F(static_cast<std::size_t>(n)), r(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        F[static_cast<std::size_t>(i)] = dist.cdf(grid.point(i));
        r[static_cast<std::size_t>(i)] = reward.mean(grid.point(i));
    }

    // Massless intervals collapse to the constant policy at the lower
    // endpoint; their value is pinned and never updated.
    for (int j = 1; j < n; ++j)
        for (int i = 0; i < j; ++i) {
            const std::size_t idx = table.index(i, j);
            table.policy[idx] = i;
            if (F[static_cast<std::size_t>(j)] - F[static_cast<std::size_t>(i)] <=
                ThresholdDist::kDegenerateMass) {
                table.degenerate[idx] = 1;
                table.values[idx] = r[static_cast<std::size_t>(i)] / (1.0 - gamma);
            }
        }

    const double pg = patience * gamma;
    std::vector<double> next(states);

    // One Jacobi update of every state (i, j) with j in the given residue
    // class; reads cur only, so sweeps are thread-order independent.
    auto sweep_range = [&](const std::vector<double>& cur, std::vector<double>& out, int residue,
                           int stride) {
        double delta = 0.0;
        for (int j = 1 + residue; j < n; j += stride) {
            const double Fj = F[static_cast<std::size_t>(j)];
            for (int i = 0; i < j; ++i) {
                const std::size_t idx = table.index(i, j);
                if (table.degenerate[idx]) {
                    out[idx] = cur[idx];
                    continue;
                }
                const double Fi = F[static_cast<std::size_t>(i)];
                double best = -std::numeric_limits<double>::infinity();
                for (int k = i; k < j; ++k) {
                    const auto ku = static_cast<std::size_t>(k);
                    double cand = (Fj - F[ku]) * (r[ku] + gamma * cur[table.index(k, j)]);
                    if (k > i) cand += (F[ku] - Fi) * pg * cur[table.index(i, k)];
                    if (cand > best) best = cand;
                }
                out[idx] = best / (Fj - Fi);
                delta = std::max(delta, std::abs(out[idx] - cur[idx]));
            }
        }
        return delta;
    };

    const int nthreads = std::min(resolve_threads(threads), n - 1);
    constexpr int kMaxSweeps = 200000;
    const double stop = tol * (1.0 - gamma);
    for (int sweep = 0;; ++sweep) {
        if (sweep >= kMaxSweeps)
            throw NumericError("interval value iteration failed to converge");
        double delta = 0.0;
        if (nthreads <= 1) {
            delta = sweep_range(table.values, next, 0, 1);
        } else {
            std::vector<double> deltas(static_cast<std::size_t>(nthreads), 0.0);
            std::vector<std::thread> pool;
            pool.reserve(static_cast<std::size_t>(nthreads));
            for (int t = 0; t < nthreads; ++t)
                pool.emplace_back([&, t] {
                    deltas[static_cast<std::size_t>(t)] =
                        sweep_range(table.values, next, t, nthreads);
                });
            for (auto& th : pool) th.join();
            delta = *std::max_element(deltas.begin(), deltas.end());
        }
        table.values.swap(next);
        table.sweep_deltas.push_back(delta);
        ++table.iterations;
        if (delta < stop) break;
    }

    // Greedy policy from the converged values, smallest action on ties.
    for (int j = 1; j < n; ++j) {
        const double Fj = F[static_cast<std::size_t>(j)];
        for (int i = 0; i < j; ++i) {
            const std::size_t idx = table.index(i, j);
            if (table.degenerate[idx]) continue;
            const double Fi = F[static_cast<std::size_t>(i)];
            double best = -std::numeric_limits<double>::infinity();
            int best_k = i;
            for (int k = i; k < j; ++k) {
                const auto ku = static_cast<std::size_t>(k);
                double cand = (Fj - F[ku]) * (r[ku] + gamma * table.values[table.index(k, j)]);
                if (k > i) cand += (F[ku] - Fi) * pg * table.values[table.index(i, k)];
                if (cand > best) {
                    best = cand;
                    best_k = k;
                }
            }
            table.policy[idx] = best_k;
        }
    }
    return table;
}

PolicyTree extract_policy_tree(const IntervalValueTable& table, int depth) {
    if (depth < 1) throw std::invalid_argument("tree depth must be at least 1");
    const int last = table.grid.size() - 1;

    PolicyTree tree;
    tree.depth = depth;
    struct Item {
        int i, j, level;
        std::string path;
    };
    std::vector<Item> frontier{{0, last, 0, ""}};
    while (!frontier.empty()) {
        std::vector<Item> deeper;
        for (const auto& item : frontier) {
            const bool zero_width = item.i >= item.j;
            const bool collapsed = zero_width || table.is_degenerate(item.i, item.j);
            const int a = collapsed ? item.i : table.policy_at(item.i, item.j);
            const bool leaf = collapsed || item.level == depth - 1;
            tree.nodes.push_back({item.path, item.level, table.grid.point(item.i),
                                  table.grid.point(item.j), table.grid.point(a), leaf});
            if (!leaf) {
                deeper.push_back({a, item.j, item.level + 1, item.path + "S"});
                deeper.push_back({item.i, a, item.level + 1, item.path + "C"});
            }
        }
        frontier = std::move(deeper);
    }
    return tree;
}

std::vector<std::pair<double, double>> first_action_curve(
    const ThresholdDist& dist, const RewardModel& reward, double gamma,
    const std::vector<double>& patience_values, const ActionGrid& grid, double tol,
    int threads) {
    std::vector<std::pair<double, double>> out;
    out.reserve(patience_values.size());
    for (double p : patience_values) {
        const IntervalValueTable table = feedback_dp(dist, reward, gamma, p, grid, tol, threads);
        out.emplace_back(p, grid.point(table.policy_at(0, grid.size() - 1)));
    }
    return out;
}

std::vector<std::pair<double, double>> partial_learning_scan(const IntervalValueTable& table) {
    const int n = table.grid.size();
    std::vector<std::pair<double, double>> out;
    out.reserve(static_cast<std::size_t>(n) - 1);
    for (int j = 1; j < n; ++j) {
        double eps = 0.0;
        for (int i = j - 1; i >= 0; --i) {
            if (table.policy_at(i, j) != i) break;
            eps = table.grid.point(j) - table.grid.point(i);
        }
        out.emplace_back(table.grid.point(j), eps);
    }
    return out;
}

void write_csv(const IntervalValueTable& table, std::ostream& out) {
    out << "l,u,value,action\n";
    const int n = table.grid.size();
    for (int i = 0; i + 1 < n; ++i)
        for (int j = i + 1; j < n; ++j)
            out << csv::format_double(table.grid.point(i)) << ','
                << csv::format_double(table.grid.point(j)) << ','
                << csv::format_double(table.value(i, j)) << ','
                << csv::format_double(table.grid.point(table.policy_at(i, j))) << '\n';
}

void write_csv(const PolicyTree& tree, std::ostream& out) {
    out << "depth,path,l,u,action\n";
    for (const auto& node : tree.nodes)
        out << node.depth << ',' << node.path << ',' << csv::format_double(node.lower) << ','
            << csv::format_double(node.upper) << ',' << csv::format_double(node.action) << '\n';
}

void write_first_action_csv(const std::vector<std::pair<double, double>>& curve,
                            std::ostream& out) {
    out << "p,x0\n";
    for (const auto& [p, x0] : curve)
        out << csv::format_double(p) << ',' << csv::format_double(x0) << '\n';
}

}  // namespace abandon
