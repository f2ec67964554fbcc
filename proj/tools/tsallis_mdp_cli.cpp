// This file is part of tsallis-mdp, a solver library for Markov decision
// processes with Tsallis entropy regularization. Distributed under the MIT
// license; see LICENSE at the repository root.
//
// Command-line front end: loads or builds MDPs, runs the solvers and the
// experiment sweeps, and writes reports as JSON or CSV.
//
// Exit codes: 0 success, 1 usage error, 2 validation error (bad file,
// schema violation), 3 solver non-convergence.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "tsallis/experiments.hpp"
#include "tsallis/mdp_io.hpp"
#include "tsallis/qmax.hpp"
#include "tsallis/solvers.hpp"

namespace {

struct RunConfig {
    std::string input;
    double q = 1.0;
    double alpha = 1.0;
    double tolerance = 0.0;       // 0 keeps the solver default
    std::size_t max_iterations = 0;
    std::string output;
    std::string format = "csv";
    std::vector<double> q_values;
    std::vector<double> alpha_values{1.0};
    std::vector<double> rewards;
    double c_min = -2.0;
    double c_max = 2.0;
    std::size_t n_points = 81;
};

tsallis::TabularMdp resolve_input(const std::string& input) {
    if (tsallis::is_builtin_scenario(input)) return tsallis::builtin_scenario(input);
    return tsallis::load_mdp(input);
}

tsallis::SolveOptions solve_options(const RunConfig& config) {
    tsallis::SolveOptions options;
    if (config.tolerance > 0.0) {
        options.value_tolerance = config.tolerance;
        options.improvement_tolerance = config.tolerance;
    }
    if (config.max_iterations > 0) {
        options.max_iterations = config.max_iterations;
    }
    return options;
}

void write_text(const std::string& text, const std::string& output) {
    if (output.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(output);
    if (!out) throw std::invalid_argument("cannot write output file: " + output);
    out << text;
}

void emit_sweep(const tsallis::SweepResult& sweep, const RunConfig& config) {
    if (config.format == "csv") {
        write_text(sweep.to_csv(), config.output);
    } else if (config.format == "json") {
        write_text(sweep.to_json_string(), config.output);
    } else {
        throw std::invalid_argument("unknown output format: " + config.format);
    }
}

void run_solve(const RunConfig& config, bool value_iteration) {
    const tsallis::TabularMdp mdp = resolve_input(config.input);
    const tsallis::EntropicIndex q(config.q);
    const tsallis::SolveOptions options = solve_options(config);
    const tsallis::SolveReport report =
        value_iteration ? tsallis::tsallis_value_iteration(mdp, q, config.alpha, options)
                        : tsallis::tsallis_policy_iteration(mdp, q, config.alpha, options);
    write_text(tsallis::report_to_json(report, config.q, config.alpha).dump(2) + "\n",
               config.output);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Tsallis-entropy regularized MDP solver and experiment runner"};
    app.require_subcommand(1);
    RunConfig config;

    auto add_io = [&](CLI::App* cmd) {
        cmd->add_option("--output,-o", config.output, "Output file (stdout when omitted)");
    };
    auto add_format = [&](CLI::App* cmd) {
        cmd->add_option("--format,-f", config.format, "Output format: csv or json")
            ->check(CLI::IsMember({"csv", "json"}));
    };
    auto add_solver_flags = [&](CLI::App* cmd) {
        cmd->add_option("--input,-i", config.input,
                        "MDP file or built-in scenario (fig3-default, bandit8, one-state)")
            ->required();
        cmd->add_option("--q", config.q, "Entropic index, > 0")->required();
        cmd->add_option("--alpha", config.alpha, "Entropy coefficient, > 0");
        cmd->add_option("--tolerance", config.tolerance, "Solver stopping tolerance");
        cmd->add_option("--max-iterations", config.max_iterations, "Solver iteration cap");
        add_io(cmd);
    };

    CLI::App* solve_tvi =
        app.add_subcommand("solve-tvi", "Solve a Tsallis MDP with value iteration");
    add_solver_flags(solve_tvi);

    CLI::App* solve_tpi =
        app.add_subcommand("solve-tpi", "Solve a Tsallis MDP with policy iteration");
    add_solver_flags(solve_tpi);

    CLI::App* validate =
        app.add_subcommand("validate", "Check an MDP file against the schema invariants");
    validate
        ->add_option("--input,-i", config.input, "MDP file or built-in scenario name")
        ->required();

    CLI::App* bandit = app.add_subcommand(
        "bandit", "Optimal bandit policies over a grid of q and alpha values");
    bandit->add_option("--q", config.q_values, "Entropic indices (comma separated)")
        ->required()
        ->delimiter(',');
    bandit->add_option("--alpha", config.alpha_values, "Entropy coefficients")
        ->delimiter(',');
    bandit->add_option("--rewards", config.rewards,
                       "Reward profile (defaults to the built-in 8-action profile)")
        ->delimiter(',');
    add_io(bandit);
    add_format(bandit);

    CLI::App* bounds = app.add_subcommand(
        "gridworld-bounds",
        "Performance error bounds of Tsallis-optimal policies on the default gridworld");
    bounds->add_option("--q", config.q_values, "Entropic indices (comma separated)")
        ->required()
        ->delimiter(',');
    add_io(bounds);
    add_format(bounds);

    CLI::App* qmax_bounds = app.add_subcommand(
        "qmax-bounds", "q-max of [c, 0] against its bounds over a grid of c values");
    qmax_bounds->add_option("--q", config.q_values, "Entropic indices (comma separated)")
        ->required()
        ->delimiter(',');
    qmax_bounds->add_option("--c-min", config.c_min, "Grid lower end");
    qmax_bounds->add_option("--c-max", config.c_max, "Grid upper end");
    qmax_bounds->add_option("--points", config.n_points, "Number of grid points");
    add_io(qmax_bounds);
    add_format(qmax_bounds);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (solve_tvi->parsed()) {
            run_solve(config, true);
        } else if (solve_tpi->parsed()) {
            run_solve(config, false);
        } else if (validate->parsed()) {
            resolve_input(config.input);
            std::cout << "ok: " << config.input << " satisfies all invariants\n";
        } else if (bandit->parsed()) {
            const std::vector<double> rewards =
                config.rewards.empty() ? tsallis::bandit8_rewards() : config.rewards;
            emit_sweep(tsallis::bandit_sweep(rewards, config.q_values, config.alpha_values),
                       config);
        } else if (bounds->parsed()) {
            emit_sweep(
                tsallis::performance_bound_sweep(tsallis::default_gridworld(), config.q_values),
                config);
        } else if (qmax_bounds->parsed()) {
            emit_sweep(tsallis::qmax_bound_sweep(config.c_min, config.c_max,
                                                    config.n_points, config.q_values),
                       config);
        }
    } catch (const tsallis::NonConvergenceError& e) {
        std::cerr << "error: non-convergence: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: validation: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
