// This file is part of tsallis-mdp, a solver library for Markov decision
// processes with Tsallis entropy regularization. Distributed under the MIT
// license; see LICENSE at the repository root.

#include "tsallis/mdp_io.hpp"

#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "tsallis/experiments.hpp"

namespace tsallis {

namespace {

const nlohmann::json& require_field(const nlohmann::json& j, const char* name) {
    if (!j.contains(name)) {
        throw std::invalid_argument(std::string("MDP file is missing field '") + name + "'");
    }
    return j.at(name);
}

std::size_t require_count(const nlohmann::json& j, const char* name) {
    const auto& field = require_field(j, name);
    if (!field.is_number_integer() || field.get<long long>() <= 0) {
        throw std::invalid_argument(std::string("field '") + name +
                                    "' must be a positive integer");
    }
    return field.get<std::size_t>();
}

// Flattens a [s][a][s'] nested array, checking every level's length.
std::vector<double> read_tensor(const nlohmann::json& field, const char* name,
                                std::size_t n_states, std::size_t n_actions) {
    std::vector<double> out;
    out.reserve(n_states * n_actions * n_states);
    if (!field.is_array() || field.size() != n_states) {
        throw std::invalid_argument(std::string("field '") + name + "' must be an array of " +
                                    std::to_string(n_states) + " per-state entries");
    }
    for (const auto& per_state : field) {
        if (!per_state.is_array() || per_state.size() != n_actions) {
            throw std::invalid_argument(std::string("field '") + name +
                                        "' rows must have one entry per action");
        }
        for (const auto& per_action : per_state) {
            if (!per_action.is_array() || per_action.size() != n_states) {
                throw std::invalid_argument(std::string("field '") + name +
                                            "' innermost arrays must have one entry per "
                                            "successor state");
            }
            for (const auto& value : per_action) {
                if (!value.is_number()) {
                    throw std::invalid_argument(std::string("field '") + name +
                                                "' contains a non-numeric entry");
                }
                out.push_back(value.get<double>());
            }
        }
    }
    return out;
}

}  // namespace

TabularMdp mdp_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw std::invalid_argument("MDP file must be a JSON object");
    const std::size_t n_states = require_count(j, "n_states");
    const std::size_t n_actions = require_count(j, "n_actions");

    const auto transition =
        read_tensor(require_field(j, "transition"), "transition", n_states, n_actions);

    const auto& discount_field = require_field(j, "discount");
    if (!discount_field.is_number()) {
        throw std::invalid_argument("field 'discount' must be a number");
    }
    const double discount = discount_field.get<double>();

    const auto& initial_field = require_field(j, "initial");
    if (!initial_field.is_array() || initial_field.size() != n_states) {
        throw std::invalid_argument("field 'initial' must list one probability per state");
    }
    std::vector<double> initial;
    for (const auto& value : initial_field) {
        if (!value.is_number()) {
            throw std::invalid_argument("field 'initial' contains a non-numeric entry");
        }
        initial.push_back(value.get<double>());
    }

    // Reward: either a full tensor or a per-(s,a) table broadcast over s'.
    const auto& reward_field = require_field(j, "reward");
    if (reward_field.is_array() && !reward_field.empty() && reward_field[0].is_array() &&
        !reward_field[0].empty() && reward_field[0][0].is_number()) {
        if (reward_field.size() != n_states) {
            throw std::invalid_argument("field 'reward' must have one row per state");
        }
        std::vector<double> reward_sa;
        for (const auto& per_state : reward_field) {
            if (!per_state.is_array() || per_state.size() != n_actions) {
                throw std::invalid_argument(
                    "field 'reward' rows must have one entry per action");
            }
            for (const auto& value : per_state) {
                if (!value.is_number()) {
                    throw std::invalid_argument("field 'reward' contains a non-numeric entry");
                }
                reward_sa.push_back(value.get<double>());
            }
        }
        return TabularMdp::from_state_action_rewards(n_states, n_actions, transition,
                                                     reward_sa, discount,
                                                     DiscreteDistribution(initial));
    }
    auto reward = read_tensor(reward_field, "reward", n_states, n_actions);
    return TabularMdp(n_states, n_actions, transition, std::move(reward), discount,
                      DiscreteDistribution(initial));
}

nlohmann::json mdp_to_json(const TabularMdp& mdp) {
    nlohmann::json j;
    j["n_states"] = mdp.n_states();
    j["n_actions"] = mdp.n_actions();
    j["discount"] = mdp.discount();
    j["initial"] = mdp.initial().probs();
    nlohmann::json transition = nlohmann::json::array();
    nlohmann::json reward = nlohmann::json::array();
    for (std::size_t s = 0; s < mdp.n_states(); ++s) {
        nlohmann::json t_state = nlohmann::json::array();
        nlohmann::json r_state = nlohmann::json::array();
        for (std::size_t a = 0; a < mdp.n_actions(); ++a) {
            nlohmann::json t_row = nlohmann::json::array();
            nlohmann::json r_row = nlohmann::json::array();
            for (std::size_t s2 = 0; s2 < mdp.n_states(); ++s2) {
                t_row.push_back(mdp.transition(s, a, s2));
                r_row.push_back(mdp.reward(s, a, s2));
            }
            t_state.push_back(std::move(t_row));
            r_state.push_back(std::move(r_row));
        }
        transition.push_back(std::move(t_state));
        reward.push_back(std::move(r_state));
    }
    j["transition"] = std::move(transition);
    j["reward"] = std::move(reward);
    return j;
}

TabularMdp load_mdp(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::invalid_argument("cannot open MDP file: " + path.string());
    }
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument("invalid JSON in " + path.string() + ": " + e.what());
    }
    return mdp_from_json(j);
}

void save_mdp(const TabularMdp& mdp, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) {
        throw std::invalid_argument("cannot write MDP file: " + path.string());
    }
    out << mdp_to_json(mdp).dump(2) << '\n';
}

bool is_builtin_scenario(std::string_view name) {
    return name == "fig3-default" || name == "bandit8" || name == "one-state";
}

TabularMdp builtin_scenario(std::string_view name) {
    if (name == "fig3-default") {
        return build_gridworld(default_gridworld());
    }
    if (name == "bandit8") {
        const std::vector<double> rewards = bandit8_rewards();
        const std::size_t n_actions = rewards.size();
        std::vector<double> transition(n_actions, 1.0);
        return TabularMdp::from_state_action_rewards(
            1, n_actions, std::move(transition), rewards, 0.9,
            DiscreteDistribution({1.0}));
    }
    if (name == "one-state") {
        return TabularMdp::from_state_action_rewards(1, 2, {1.0, 1.0}, {0.0, 0.0}, 0.5,
                                                     DiscreteDistribution({1.0}));
    }
    throw std::invalid_argument("unknown built-in scenario: " + std::string(name));
}

nlohmann::json report_to_json(const SolveReport& report, double q, double alpha) {
    nlohmann::json j;
    j["q"] = q;
    j["alpha"] = alpha;
    j["iterations"] = report.iterations;
    j["tbo_residual"] = report.tbo_residual;
    j["v_function"] = report.v_function;
    nlohmann::json q_rows = nlohmann::json::array();
    nlohmann::json policy_rows = nlohmann::json::array();
    for (std::size_t s = 0; s < report.q_function.n_states(); ++s) {
        const auto row = report.q_function.row(s);
        q_rows.push_back(std::vector<double>(row.begin(), row.end()));
        policy_rows.push_back(report.policy.row(s).probs());
    }
    j["q_function"] = std::move(q_rows);
    j["policy"] = std::move(policy_rows);
    j["residuals"] = report.residuals;
    j["objectives"] = report.objectives;
    j["warnings"] = report.warnings;
    return j;
}

}  // namespace tsallis
