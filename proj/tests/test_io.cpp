// This file is part of tsallis-mdp, a solver library for Markov decision
// processes with Tsallis entropy regularization. Distributed under the MIT
// license; see LICENSE at the repository root.

#include <doctest.h>

#include <json.hpp>
#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include "oracles.hpp"
#include "tsallis/experiments.hpp"
#include "tsallis/mdp_io.hpp"

using tsallis::builtin_scenario;
using tsallis::is_builtin_scenario;
using tsallis::load_mdp;
using tsallis::mdp_from_json;
using tsallis::mdp_to_json;
using tsallis::save_mdp;
using tsallis::TabularMdp;

namespace {

namespace fs = std::filesystem;

fs::path temp_dir() {
    const fs::path dir = fs::temp_directory_path() / "tsallis_mdp_tests";
    fs::create_directories(dir);
    return dir;
}

int run_cli(const std::string& args) {
    const std::string command = std::string(TSALLIS_CLI_PATH) + " " + args + " 2>/dev/null";
    const int status = std::system(command.c_str());
    REQUIRE(status != -1);
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path);
    REQUIRE(in.good());
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

}  // namespace

TEST_CASE("MDP files round-trip bit-exactly") {
    std::mt19937 rng(808);
    const TabularMdp mdp = oracles::random_mdp(rng, 4, 3, 0.875);
    const fs::path path = temp_dir() / "roundtrip.json";
    save_mdp(mdp, path);
    const TabularMdp loaded = load_mdp(path);
    CHECK(loaded.n_states() == mdp.n_states());
    CHECK(loaded.n_actions() == mdp.n_actions());
    CHECK(loaded.discount() == mdp.discount());
    CHECK(loaded.transition_tensor() == mdp.transition_tensor());
    CHECK(loaded.reward_tensor() == mdp.reward_tensor());
    CHECK(loaded.initial().probs() == mdp.initial().probs());
}

TEST_CASE("state-action rewards broadcast over successors") {
    const nlohmann::json j{
        {"n_states", 2},
        {"n_actions", 1},
        {"transition", {{{0.5, 0.5}}, {{1.0, 0.0}}}},
        {"reward", {{1.5}, {-1.0}}},
        {"discount", 0.9},
        {"initial", {1.0, 0.0}},
    };
    const TabularMdp mdp = mdp_from_json(j);
    CHECK(mdp.reward(0, 0, 0) == 1.5);
    CHECK(mdp.reward(0, 0, 1) == 1.5);
    CHECK(mdp.expected_reward(1, 0) == -1.0);
}

TEST_CASE("schema violations are reported by name") {
    nlohmann::json j{
        {"n_states", 1},
        {"n_actions", 1},
        {"transition", {{{0.9}}}},
        {"reward", {{{0.0}}}},
        {"discount", 0.5},
        {"initial", {1.0}},
    };
    CHECK_THROWS_WITH_AS(mdp_from_json(j), doctest::Contains("transition row (s=0,a=0)"),
                         std::invalid_argument);

    j["transition"] = {{{1.0}}};
    j.erase("discount");
    CHECK_THROWS_WITH_AS(mdp_from_json(j), doctest::Contains("discount"),
                         std::invalid_argument);

    CHECK_THROWS_AS(load_mdp(temp_dir() / "does_not_exist.json"), std::invalid_argument);

    const fs::path garbled = temp_dir() / "garbled.json";
    std::ofstream(garbled) << "{ not json";
    CHECK_THROWS_WITH_AS(load_mdp(garbled), doctest::Contains("invalid JSON"),
                         std::invalid_argument);
}

TEST_CASE("built-in scenarios") {
    CHECK(is_builtin_scenario("fig3-default"));
    CHECK(is_builtin_scenario("bandit8"));
    CHECK(is_builtin_scenario("one-state"));
    CHECK_FALSE(is_builtin_scenario("nonesuch"));

    const TabularMdp one = builtin_scenario("one-state");
    CHECK(one.n_states() == 1);
    CHECK(one.n_actions() == 2);
    CHECK(one.discount() == 0.5);
    CHECK(one.expected_reward(0, 0) == 0.0);

    const TabularMdp bandit = builtin_scenario("bandit8");
    CHECK(bandit.n_states() == 1);
    CHECK(bandit.n_actions() == 8);

    const TabularMdp grid = builtin_scenario("fig3-default");
    CHECK(grid.n_states() == 25);

    CHECK_THROWS_AS(builtin_scenario("nonesuch"), std::invalid_argument);
}

TEST_CASE("CLI solves the canonical one-state file") {
    const fs::path out = temp_dir() / "tvi_report.json";
    const int code =
        run_cli("solve-tvi --input one-state --q 1 --alpha 1 --output " + out.string());
    REQUIRE(code == 0);
    const nlohmann::json report = nlohmann::json::parse(read_file(out));
    CHECK(report.at("v_function")[0].get<double>() ==
          doctest::Approx(2.0 * std::log(2.0)).epsilon(1e-9));
    CHECK(report.contains("tbo_residual"));
    CHECK(report.at("tbo_residual").get<double>() <= 1e-7);
    CHECK(report.at("policy")[0][0].get<double>() == doctest::Approx(0.5).epsilon(1e-9));

    const fs::path out_tpi = temp_dir() / "tpi_report.json";
    const int code_tpi =
        run_cli("solve-tpi --input one-state --q 1 --alpha 1 --output " + out_tpi.string());
    REQUIRE(code_tpi == 0);
    const nlohmann::json report_tpi = nlohmann::json::parse(read_file(out_tpi));
    CHECK(report_tpi.at("v_function")[0].get<double>() ==
          doctest::Approx(2.0 * std::log(2.0)).epsilon(1e-9));
}

TEST_CASE("CLI validates files and names the broken invariant") {
    const fs::path bad = temp_dir() / "bad.json";
    std::ofstream(bad) << R"({"n_states": 1, "n_actions": 1,
        "transition": [[[0.9]]], "reward": [[[0.0]]],
        "discount": 0.5, "initial": [1.0]})";
    const fs::path stderr_file = temp_dir() / "validate_stderr.txt";
    const std::string command = std::string(TSALLIS_CLI_PATH) + " validate --input " +
                                bad.string() + " 2>" + stderr_file.string();
    const int status = std::system(command.c_str());
    REQUIRE(status != -1);
    CHECK(WEXITSTATUS(status) == 2);
    const std::string message = read_file(stderr_file);
    CHECK(message.find("transition row (s=0,a=0)") != std::string::npos);
    CHECK(message.rfind("error: validation:", 0) == 0);

    CHECK(run_cli("validate --input one-state") == 0);
    CHECK(run_cli("validate --input " + (temp_dir() / "missing.json").string()) == 2);
}

TEST_CASE("CLI solves from an MDP file on disk") {
    const fs::path mdp_file = temp_dir() / "one_state.json";
    save_mdp(builtin_scenario("one-state"), mdp_file);
    const fs::path out = temp_dir() / "file_report.json";
    REQUIRE(run_cli("solve-tvi --input " + mdp_file.string() +
                    " --q 1 --alpha 1 --output " + out.string()) == 0);
    const nlohmann::json report = nlohmann::json::parse(read_file(out));
    CHECK(report.at("v_function")[0].get<double>() ==
          doctest::Approx(2.0 * std::log(2.0)).epsilon(1e-9));
}

TEST_CASE("CLI usage errors exit with code 1") {
    CHECK(run_cli("no-such-command") == 1);
    CHECK(run_cli("solve-tvi --q 1") == 1);              // missing --input
    CHECK(run_cli("bandit --q 1 --format yaml") == 1);   // unknown format
    CHECK(run_cli("--help") == 0);
}

TEST_CASE("CLI rejects invalid solver parameters as validation errors") {
    CHECK(run_cli("solve-tvi --input one-state --q -1 --alpha 1") == 2);
    CHECK(run_cli("solve-tvi --input one-state --q 1 --alpha 0") == 2);
}

TEST_CASE("CLI reports non-convergence with exit code 3") {
    CHECK(run_cli("solve-tvi --input fig3-default --q 1.5 --alpha 1 --max-iterations 3") ==
          3);
}

TEST_CASE("CLI gridworld bounds satisfy the sandwich per row") {
    const fs::path out = temp_dir() / "bounds.csv";
    REQUIRE(run_cli("gridworld-bounds --q 1,2,5,10 --output " + out.string()) == 0);
    const tsallis::SweepResult sweep = tsallis::SweepResult::from_csv(read_file(out));
    REQUIRE(sweep.rows.size() == 4);
    REQUIRE(sweep.columns ==
            std::vector<std::string>{"q", "J_opt", "J_tsallis", "lower_bound"});
    for (std::size_t i = 0; i < sweep.rows.size(); ++i) {
        CHECK(sweep.at(i, "lower_bound") <= sweep.at(i, "J_tsallis") + 1e-7);
        CHECK(sweep.at(i, "J_tsallis") <= sweep.at(i, "J_opt") + 1e-7);
    }
}

TEST_CASE("CLI output is byte-identical across runs") {
    const fs::path first = temp_dir() / "sweep_a.csv";
    const fs::path second = temp_dir() / "sweep_b.csv";
    REQUIRE(run_cli("bandit --q 1,2,5 --alpha 0.5,1 --output " + first.string()) == 0);
    REQUIRE(run_cli("bandit --q 1,2,5 --alpha 0.5,1 --output " + second.string()) == 0);
    CHECK(read_file(first) == read_file(second));

    const fs::path qa = temp_dir() / "qmax_a.json";
    const fs::path qb = temp_dir() / "qmax_b.json";
    REQUIRE(run_cli("qmax-bounds --q 1,2 --points 11 --format json --output " +
                    qa.string()) == 0);
    REQUIRE(run_cli("qmax-bounds --q 1,2 --points 11 --format json --output " +
                    qb.string()) == 0);
    CHECK(read_file(qa) == read_file(qb));
}

TEST_CASE("CLI bandit accepts a custom reward profile") {
    const fs::path out = temp_dir() / "custom_bandit.csv";
    REQUIRE(run_cli("bandit --q 2 --rewards 2,1 --output " + out.string()) == 0);
    const tsallis::SweepResult sweep = tsallis::SweepResult::from_csv(read_file(out));
    REQUIRE(sweep.rows.size() == 1);
    CHECK(sweep.at(0, "p0") == doctest::Approx(0.75).epsilon(1e-12));
    CHECK(sweep.at(0, "p1") == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(sweep.at(0, "psi") == doctest::Approx(1.25).epsilon(1e-12));
}

TEST_CASE("CLI CSV output re-reads without loss") {
    const fs::path out = temp_dir() / "bandit.csv";
    REQUIRE(run_cli("bandit --q 1,1.5,2 --output " + out.string()) == 0);
    const tsallis::SweepResult direct = tsallis::bandit_sweep(
        tsallis::bandit8_rewards(), std::vector<double>{1.0, 1.5, 2.0},
        std::vector<double>{1.0});
    const tsallis::SweepResult reread = tsallis::SweepResult::from_csv(read_file(out));
    REQUIRE(reread.rows.size() == direct.rows.size());
    for (std::size_t i = 0; i < direct.rows.size(); ++i) {
        for (std::size_t c = 0; c < direct.columns.size(); ++c) {
            CHECK(reread.rows[i][c] == direct.rows[i][c]);  // bit-exact
        }
    }
}
