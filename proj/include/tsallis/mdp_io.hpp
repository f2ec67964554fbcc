// This file is part of tsallis-mdp, a solver library for Markov decision
// processes with Tsallis entropy regularization. Distributed under the MIT
// license; see LICENSE at the repository root.

#pragma once

#include <json.hpp>

#include <filesystem>
#include <string>
#include <string_view>

#include "tsallis/mdp.hpp"
#include "tsallis/solvers.hpp"

namespace tsallis {

/**
 * Parses an MDP from its JSON description:
 *   { "n_states": S, "n_actions": A, "transition": [[[..]]], "reward": ...,
 *     "discount": g, "initial": [..] }
 * `reward` may be a full [s][a][s'] tensor or an [s][a] table, which is
 * broadcast over successor states. Every type invariant is validated;
 * violations throw std::invalid_argument naming the offending field or row.
 */
TabularMdp mdp_from_json(const nlohmann::json& j);
nlohmann::json mdp_to_json(const TabularMdp& mdp);

/// File variants. A missing or unparseable file throws std::invalid_argument.
TabularMdp load_mdp(const std::filesystem::path& path);
void save_mdp(const TabularMdp& mdp, const std::filesystem::path& path);

/// Names accepted anywhere an MDP file is: fig3-default, bandit8, one-state.
bool is_builtin_scenario(std::string_view name);
TabularMdp builtin_scenario(std::string_view name);

/// JSON form of a converged solve, including the optimality residual.
nlohmann::json report_to_json(const SolveReport& report, double q, double alpha);

}  // namespace tsallis
