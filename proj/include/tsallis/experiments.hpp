// This file is part of tsallis-mdp, a solver library for Markov decision
// processes with Tsallis entropy regularization. Distributed under the MIT
// license; see LICENSE at the repository root.

#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "tsallis/mdp.hpp"
#include "tsallis/qmath.hpp"

namespace tsallis {

/**
 * A rectangular gridworld with reward-on-entry cells. Cell (x, y) maps to
 * state y*width + x. Moves that would leave the grid self-loop; with
 * probability `slip_probability` the agent moves in a uniformly chosen
 * different direction instead of the intended one.
 */
struct GridWorldSpec {
    std::size_t width = 0;
    std::size_t height = 0;
    /// One reward per cell, row-major; collected on entering the cell.
    std::vector<double> cell_rewards;
    /// 4 = up/down/left/right, 5 adds a stay action.
    std::size_t n_move_actions = 4;
    double slip_probability = 0.0;
    double discount = 0.9;
    /// One probability per cell.
    std::vector<double> start_distribution;
};

/**
 * The default 5x5 scenario: a reward-2 cell in the far corner, an L-shaped
 * wall of three reward -0.5 cells in front of it, everything else 0.
 * Start in the opposite corner, 4 actions, slip 0.1, discount 0.9.
 */
GridWorldSpec default_gridworld();

/// The canonical 8-action bandit reward profile, distinct values spanning [0, 1].
std::vector<double> bandit8_rewards();

/// Expands a gridworld spec into a tabular MDP; throws on malformed specs.
TabularMdp build_gridworld(const GridWorldSpec& spec);

/**
 * A flat numeric table with named columns: the output format of every sweep.
 * Rows are emitted in deterministic axis order. CSV serialization carries 17
 * significant digits so values round-trip bit-exactly.
 */
struct SweepResult {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;

    double at(std::size_t row, const std::string& column) const;

    std::string to_csv() const;
    std::string to_json_string() const;
    static SweepResult from_csv(const std::string& text);
    static SweepResult from_json_string(const std::string& text);
};

/**
 * Optimal bandit policies over a (q, alpha) grid. Columns: q, alpha, value,
 * psi, support_size, then one probability column per action (p0, p1, ...).
 * Rows ordered by q (outer) then alpha (inner).
 */
SweepResult bandit_sweep(std::span<const double> rewards, std::span<const double> q_values,
                         std::span<const double> alpha_values);

/**
 * Performance error bounds on a gridworld: solves the standard MDP for the
 * greedy optimum J(pi*) and the Tsallis MDP (alpha = 1) per entropic index,
 * then evaluates the entropy-free return of each Tsallis-optimal policy.
 * Columns: q, J_opt, J_tsallis, lower_bound, where lower_bound =
 * J(pi*) + (1-gamma)^{-1} ln_q(1/|A|). The sandwich
 * lower_bound <= J_tsallis <= J_opt is checked for every row.
 */
SweepResult performance_bound_sweep(const GridWorldSpec& spec, std::span<const double> q_values);

/**
 * Tabulates the q-maximum of the two-point payoff [c, 0] against its bounds
 * over a grid of c values. Columns: q, c, q_max, max_f, upper_bound, with
 * max_f <= q_max <= upper_bound = max_f - ln_q(1/2) checked per row.
 * Rows ordered by q (outer) then c (inner).
 */
SweepResult qmax_bound_sweep(double c_min, double c_max, std::size_t n_points,
                                std::span<const double> q_values);

}  // namespace tsallis
