#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>

#include "doctest.h"

#include "abandon/csv_io.hpp"

namespace fs = std::filesystem;

namespace {

struct CliResult {
    int status = -1;
    std::string out;
    std::string err;
};

std::string slurp(const fs::path& path) {
    std::ifstream in(path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path scratch_dir() {
    const fs::path dir = fs::temp_directory_path() / "abandon_cli_tests";
    fs::create_directories(dir);
    return dir;
}

CliResult run_cli(const std::string& args) {
    const char* bin = std::getenv("ABANDON_CLI");
    REQUIRE_MESSAGE(bin != nullptr, "ABANDON_CLI must point at the binary under test");
    static int counter = 0;
    const fs::path out_path = scratch_dir() / ("out_" + std::to_string(++counter) + ".txt");
    const fs::path err_path = scratch_dir() / ("err_" + std::to_string(counter) + ".txt");

    const std::string cmd = std::string("\"") + bin + "\" " + args + " > " +
                            out_path.string() + " 2> " + err_path.string();
    const int raw = std::system(cmd.c_str());
    CliResult res;
    res.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    res.out = slurp(out_path);
    res.err = slurp(err_path);
    return res;
}

// Value of "key=" in a "key=value key=value ..." line.
std::string field(const std::string& text, const std::string& key) {
    const auto pos = text.find(key + "=");
    REQUIRE(pos != std::string::npos);
    const auto start = pos + key.size() + 1;
    auto end = text.find_first_of(" \n", start);
    if (end == std::string::npos) end = text.size();
    return text.substr(start, end - start);
}

}  // namespace

TEST_CASE("solve reports the uniform optimum") {
    const auto res = run_cli("solve");
    CHECK(res.status == 0);
    CHECK(field(res.out, "x_star") == "0.5");
    CHECK(field(res.out, "objective") == "0.25");
}

TEST_CASE("solve writes a CSV when asked") {
    const fs::path out = scratch_dir() / "solve.csv";
    const auto res = run_cli("solve --out " + out.string());
    CHECK(res.status == 0);
    const std::string text = slurp(out);
    CHECK(text.rfind("model,x_star,objective,value\n", 0) == 0);
    CHECK(text.find("fixed,0.5,0.25,") != std::string::npos);
}

TEST_CASE("solve handles the independent model") {
    const auto res = run_cli("solve --model independent --gamma 0.9");
    CHECK(res.status == 0);
    const double x = std::stod(field(res.out, "x_star"));
    const double root = (-0.2 + std::sqrt(0.4)) / 1.8;
    CHECK(std::abs(x - root) < 1e-3);
}

TEST_CASE("bad configuration values exit with status 2") {
    const auto bad_dist = run_cli("solve --dist nope:1");
    CHECK(bad_dist.status == 2);
    CHECK(bad_dist.err.find("--dist") != std::string::npos);

    const auto bad_model = run_cli("solve --model sideways");
    CHECK(bad_model.status == 2);

    const auto bad_flag = run_cli("solve --frobnicate");
    CHECK(bad_flag.status == 2);

    const auto no_sub = run_cli("");
    CHECK(no_sub.status == 2);
}

TEST_CASE("numeric failures exit with status 3") {
    const auto res = run_cli("solve --reward const:0");
    CHECK(res.status == 3);
    CHECK(res.err.find("error") != std::string::npos);
}

TEST_CASE("dp writes value table, tree, curve and charts") {
    const fs::path dir = scratch_dir();
    const fs::path vt = dir / "vt.csv";
    const fs::path tree = dir / "tree.csv";
    const fs::path fa = dir / "fa.csv";
    const auto res = run_cli("dp --p 0 --gamma 0.9 --grid 51 --out " + vt.string() +
                             " --tree 4 --tree-out " + tree.string() +
                             " --first-action 0:0.9:4 --first-action-out " + fa.string());
    REQUIRE(res.status == 0);
    CHECK(field(res.out, "root_action") == "0.5");

    // Value table round-trips byte for byte through the CSV layer.
    std::ifstream vt_in(vt);
    const auto parsed = abandon::csv::read_numeric_csv(vt_in);
    CHECK(parsed.columns.size() == 4);
    CHECK(parsed.rows.size() == 51 * 50 / 2);
    std::ostringstream rewritten;
    abandon::csv::write_numeric_csv(parsed, rewritten);
    CHECK(rewritten.str() == slurp(vt));

    const std::string tree_text = slurp(tree);
    CHECK(tree_text.rfind("depth,path,l,u,action\n", 0) == 0);

    std::istringstream fa_in(slurp(fa));
    std::string line;
    std::getline(fa_in, line);
    CHECK(line == "p,x0");
    int rows = 0;
    while (std::getline(fa_in, line))
        if (!line.empty()) ++rows;
    CHECK(rows == 4);

    CHECK(slurp(dir / "tree.svg").rfind("<svg", 0) == 0);
    CHECK(slurp(dir / "fa.svg").rfind("<svg", 0) == 0);
}

TEST_CASE("regret runs are deterministic for a fixed seed") {
    const fs::path dir = scratch_dir();
    const std::string base = "regret --alg moss --n 60 --reps 2 --K 4 --seed 11 --grid 501";
    const auto a = run_cli(base + " --out " + (dir / "ra").string());
    const auto b = run_cli(base + " --out " + (dir / "rb").string());
    REQUIRE(a.status == 0);
    REQUIRE(b.status == 0);
    const std::string csv_a = slurp(dir / "ra_moss.csv");
    CHECK(csv_a == slurp(dir / "rb_moss.csv"));
    CHECK(csv_a.rfind("rep,user,action,payoff,cum_regret\n", 0) == 0);
    CHECK(fs::exists(dir / "ra_regret.svg"));

    const auto bad = run_cli("regret --alg warpdrive --out " + (dir / "rc").string());
    CHECK(bad.status == 2);
}

TEST_CASE("config files feed options and the command line overrides them") {
    const fs::path cfg = scratch_dir() / "solve.cfg";
    {
        std::ofstream f(cfg);
        f << "model=independent\n";
        f << "gamma=0.5\n";
    }
    const auto from_file = run_cli("solve --config " + cfg.string());
    REQUIRE(from_file.status == 0);
    const double x_file = std::stod(field(from_file.out, "x_star"));
    CHECK(std::abs(x_file - (std::sqrt(2.0) - 1.0)) < 1e-3);

    const auto overridden = run_cli("solve --gamma 0.9 --config " + cfg.string());
    REQUIRE(overridden.status == 0);
    const double x_cli = std::stod(field(overridden.out, "x_star"));
    const double root = (-0.2 + std::sqrt(0.4)) / 1.8;
    CHECK(std::abs(x_cli - root) < 1e-3);
}

TEST_CASE("unknown config keys are rejected") {
    const fs::path cfg = scratch_dir() / "bad.cfg";
    {
        std::ofstream f(cfg);
        f << "gamma=0.5\n";
        f << "warp_factor=9\n";
    }
    const auto res = run_cli("solve --config " + cfg.string());
    CHECK(res.status == 2);
}

TEST_CASE("robustness small prints a satisfied report") {
    const auto res = run_cli("robustness small --y 0.05 --mc-reps 2000 --grid 2001 --seed 5");
    REQUIRE(res.status == 0);
    CHECK(field(res.out, "mode") == "small-noise");
    CHECK(field(res.out, "satisfied") == "true");
    CHECK(field(res.out, "policy_action") == "0.45");
}

TEST_CASE("robustness large validates its cover") {
    const auto res = run_cli(
        "robustness large --dist uniform:0.4,0.6 --noise uniform:1 --cover 0.4,0.6,0 "
        "--grid 501");
    REQUIRE(res.status == 0);
    CHECK(field(res.out, "mode") == "large-noise");
    CHECK(field(res.out, "satisfied") == "true");

    const auto bad = run_cli(
        "robustness large --dist uniform:0.4,0.6 --noise uniform:1 --cover 0.45,0.55,0 "
        "--grid 501");
    CHECK(bad.status == 2);
}

TEST_CASE("tabulated distributions load from CSV files") {
    const fs::path table = scratch_dir() / "dist.csv";
    {
        std::ofstream f(table);
        f << "x,F\n0,0\n0.5,0.8\n1,1\n";
    }
    const auto res = run_cli("solve --dist table:" + table.string());
    REQUIRE(res.status == 0);
    // Mass piles up below 0.5, so the optimum moves off 0.5.
    const double x = std::stod(field(res.out, "x_star"));
    CHECK(x < 0.5);

    const fs::path bad = scratch_dir() / "bad_dist.csv";
    {
        std::ofstream f(bad);
        f << "x,F\n0,0.5\n1,1\n";  // CDF does not start at 0
    }
    CHECK(run_cli("solve --dist table:" + bad.string()).status == 2);
    CHECK(run_cli("solve --dist table:/nonexistent/file.csv").status == 2);
}
