// This file is part of tsallis-mdp, a solver library for Markov decision
// processes with Tsallis entropy regularization. Distributed under the MIT
// license; see LICENSE at the repository root.

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "tsallis/experiments.hpp"
#include "tsallis/qmath.hpp"

using tsallis::bandit8_rewards;
using tsallis::bandit_sweep;
using tsallis::build_gridworld;
using tsallis::default_gridworld;
using tsallis::DiscreteDistribution;
using tsallis::EntropicIndex;
using tsallis::GridWorldSpec;
using tsallis::ln_q;
using tsallis::SweepResult;
using tsallis::TabularMdp;
using tsallis::performance_bound_sweep;
using tsallis::qmax_bound_sweep;

TEST_CASE("one-cell grid is a single absorbing state") {
    GridWorldSpec spec;
    spec.width = 1;
    spec.height = 1;
    spec.cell_rewards = {2.0};
    spec.slip_probability = 0.0;
    spec.discount = 0.9;
    spec.start_distribution = {1.0};
    const TabularMdp mdp = build_gridworld(spec);
    CHECK(mdp.n_states() == 1);
    for (std::size_t a = 0; a < mdp.n_actions(); ++a) {
        CHECK(mdp.transition(0, a, 0) == doctest::Approx(1.0));
        CHECK(mdp.reward(0, a, 0) == doctest::Approx(2.0));
    }
}

TEST_CASE("deterministic moves land where they should") {
    GridWorldSpec spec;
    spec.width = 2;
    spec.height = 2;
    spec.cell_rewards = {0.0, 1.0, 0.0, 0.0};
    spec.slip_probability = 0.0;
    spec.discount = 0.9;
    spec.start_distribution = {1.0, 0.0, 0.0, 0.0};
    const TabularMdp mdp = build_gridworld(spec);
    // action 3 = right: (0,0) -> (1,0), which is state 1
    CHECK(mdp.transition(0, 3, 1) == doctest::Approx(1.0));
    CHECK(mdp.reward(0, 3, 1) == doctest::Approx(1.0));  // reward on entry
    // moving left from (0,0) self-loops at the wall
    CHECK(mdp.transition(0, 2, 0) == doctest::Approx(1.0));
}

TEST_CASE("default scenario is stochastic and uses the three-value palette") {
    const GridWorldSpec spec = default_gridworld();
    const TabularMdp mdp = build_gridworld(spec);
    CHECK(mdp.n_states() == 25);
    CHECK(mdp.n_actions() == 4);
    for (std::size_t s = 0; s < mdp.n_states(); ++s) {
        for (std::size_t a = 0; a < mdp.n_actions(); ++a) {
            double sum = 0.0;
            for (std::size_t s2 = 0; s2 < mdp.n_states(); ++s2) {
                sum += mdp.transition(s, a, s2);
            }
            CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
        }
    }
    for (double r : spec.cell_rewards) {
        CHECK((r == 0.0 || r == 2.0 || r == -0.5));
    }
    // the goal corner is worth 2 and is fenced by three penalty cells
    CHECK(spec.cell_rewards[24] == 2.0);
    CHECK(spec.cell_rewards[23] == -0.5);
    CHECK(spec.cell_rewards[19] == -0.5);
    CHECK(spec.cell_rewards[18] == -0.5);
}

TEST_CASE("gridworld spec validation") {
    GridWorldSpec spec = default_gridworld();
    spec.cell_rewards.pop_back();
    CHECK_THROWS_AS(build_gridworld(spec), std::invalid_argument);

    GridWorldSpec bad_actions = default_gridworld();
    bad_actions.n_move_actions = 3;
    CHECK_THROWS_AS(build_gridworld(bad_actions), std::invalid_argument);

    GridWorldSpec bad_slip = default_gridworld();
    bad_slip.slip_probability = 1.0;
    CHECK_THROWS_AS(build_gridworld(bad_slip), std::invalid_argument);
}

TEST_CASE("five-action grids can stand still") {
    GridWorldSpec spec = default_gridworld();
    spec.n_move_actions = 5;
    spec.slip_probability = 0.0;
    const TabularMdp mdp = build_gridworld(spec);
    for (std::size_t s = 0; s < mdp.n_states(); ++s) {
        CHECK(mdp.transition(s, 4, s) == doctest::Approx(1.0));
    }

    // with slip, rows stay stochastic and the bound sweep still holds
    spec.slip_probability = 0.2;
    const TabularMdp slippery = build_gridworld(spec);
    for (std::size_t s = 0; s < slippery.n_states(); ++s) {
        for (std::size_t a = 0; a < slippery.n_actions(); ++a) {
            double sum = 0.0;
            for (std::size_t s2 = 0; s2 < slippery.n_states(); ++s2) {
                sum += slippery.transition(s, a, s2);
            }
            CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
        }
    }
    const std::vector<double> q_values{1.0, 3.0};
    const SweepResult sweep = performance_bound_sweep(spec, q_values);
    for (std::size_t i = 0; i < sweep.rows.size(); ++i) {
        CHECK(sweep.at(i, "lower_bound") <= sweep.at(i, "J_tsallis") + 1e-7);
        CHECK(sweep.at(i, "J_tsallis") <= sweep.at(i, "J_opt") + 1e-7);
    }
}

TEST_CASE("bandit sweep reproduces the sparsity progression") {
    const auto rewards = bandit8_rewards();
    const std::vector<double> q_values{1.0, 1.2, 1.5, 2.0, 3.0, 5.0, 10.0, 100.0};
    const std::vector<double> alpha_values{1.0};
    const SweepResult sweep = bandit_sweep(rewards, q_values, alpha_values);
    REQUIRE(sweep.rows.size() == q_values.size());

    // q -> 1 keeps every action in play
    CHECK(sweep.at(0, "support_size") == doctest::Approx(8.0));
    for (std::size_t a = 0; a < rewards.size(); ++a) {
        CHECK(sweep.at(0, "p" + std::to_string(a)) > 0.0);
    }
    // support sizes never grow with q
    for (std::size_t i = 1; i < sweep.rows.size(); ++i) {
        CHECK(sweep.at(i, "support_size") <= sweep.at(i - 1, "support_size"));
    }
    // q = 100 concentrates on the argmax
    CHECK(sweep.at(q_values.size() - 1, "p0") >= 1.0 - 1e-3);
}

TEST_CASE("bandit sweep support grows with alpha at fixed q") {
    const auto rewards = bandit8_rewards();
    const std::vector<double> q_values{2.0};
    const std::vector<double> alpha_values{2.0, 1.5, 1.0, 0.6, 0.3, 0.1};
    const SweepResult sweep = bandit_sweep(rewards, q_values, alpha_values);
    for (std::size_t i = 1; i < sweep.rows.size(); ++i) {
        CHECK(sweep.at(i, "support_size") <= sweep.at(i - 1, "support_size"));
    }
}

TEST_CASE("performance bounds hold on the default gridworld") {
    const std::vector<double> q_values{1.0, 2.0, 5.0, 10.0, 100.0};
    const SweepResult sweep = performance_bound_sweep(default_gridworld(), q_values);
    REQUIRE(sweep.rows.size() == q_values.size());
    for (std::size_t i = 0; i < sweep.rows.size(); ++i) {
        const double j_opt = sweep.at(i, "J_opt");
        const double j_tsallis = sweep.at(i, "J_tsallis");
        const double lower = sweep.at(i, "lower_bound");
        CHECK(lower <= j_tsallis + 1e-7);
        CHECK(j_tsallis <= j_opt + 1e-7);
    }
    // returns drift toward the unregularized optimum as q grows
    for (std::size_t i = 1; i < sweep.rows.size(); ++i) {
        CHECK(sweep.at(i, "J_tsallis") >= sweep.at(i - 1, "J_tsallis") - 1e-7);
    }
    // the q = 10 gap bound evaluates to the closed form (1/(1-g)) (1 - |A|^-9)/9
    const double gap = sweep.at(3, "J_opt") - sweep.at(3, "lower_bound");
    const double expected = (1.0 / (1.0 - 0.9)) * (1.0 - std::pow(4.0, -9.0)) / 9.0;
    CHECK(gap == doctest::Approx(expected).epsilon(1e-9));
}

TEST_CASE("q-max bound tabulation matches hand values") {
    const std::vector<double> q_values{1.0, 2.0, 5.0};
    const SweepResult sweep = qmax_bound_sweep(-2.0, 2.0, 41, q_values);
    REQUIRE(sweep.rows.size() == 3 * 41);

    // c = 0 at q = 1: q-max([0,0]) = log 2
    CHECK(sweep.at(20, "q_max") == doctest::Approx(std::log(2.0)).epsilon(1e-9));
    // c = 2 at q = 2: value within [2, 2.5]
    const std::size_t q2_last = 41 + 40;
    CHECK(sweep.at(q2_last, "c") == doctest::Approx(2.0));
    CHECK(sweep.at(q2_last, "q_max") >= 2.0);
    CHECK(sweep.at(q2_last, "q_max") <= 2.5);

    // bounds tighten as q grows
    const auto gap_at = [&](double qv) {
        return -ln_q(0.5, EntropicIndex(qv));
    };
    CHECK(gap_at(1.0) > gap_at(2.0));
    CHECK(gap_at(2.0) > gap_at(5.0));
    for (std::size_t i = 0; i < sweep.rows.size(); ++i) {
        CHECK(sweep.at(i, "upper_bound") ==
              doctest::Approx(sweep.at(i, "max_f") + gap_at(sweep.at(i, "q"))));
    }
}

TEST_CASE("sweeps are deterministic") {
    const std::vector<double> q_values{1.0, 3.0};
    const SweepResult a = performance_bound_sweep(default_gridworld(), q_values);
    const SweepResult b = performance_bound_sweep(default_gridworld(), q_values);
    CHECK(a.to_csv() == b.to_csv());
    CHECK(a.to_json_string() == b.to_json_string());
}

TEST_CASE("sweep tables round-trip through CSV and JSON bit-exactly") {
    const std::vector<double> q_values{0.7, 1.0, 2.0, 3.3};
    const SweepResult sweep = qmax_bound_sweep(-1.0, 1.0, 17, q_values);

    const SweepResult from_csv = SweepResult::from_csv(sweep.to_csv());
    REQUIRE(from_csv.columns == sweep.columns);
    REQUIRE(from_csv.rows.size() == sweep.rows.size());
    for (std::size_t i = 0; i < sweep.rows.size(); ++i) {
        for (std::size_t c = 0; c < sweep.columns.size(); ++c) {
            CHECK(from_csv.rows[i][c] == sweep.rows[i][c]);  // exact
        }
    }

    const SweepResult from_json = SweepResult::from_json_string(sweep.to_json_string());
    REQUIRE(from_json.rows.size() == sweep.rows.size());
    for (std::size_t i = 0; i < sweep.rows.size(); ++i) {
        for (std::size_t c = 0; c < sweep.columns.size(); ++c) {
            CHECK(from_json.rows[i][c] == sweep.rows[i][c]);  // exact
        }
    }
}
