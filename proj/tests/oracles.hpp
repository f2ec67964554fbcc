// This file is part of tsallis-mdp, a solver library for Markov decision
// processes with Tsallis entropy regularization. Distributed under the MIT
// license; see LICENSE at the repository root.
//
// Test-only reference implementations, deliberately independent of the
// solver paths they are used to check: brute-force searches, a
// threshold-bisection simplex projection, a log-sum-exp value iteration and
// a direct linear solve of the expectation equation.

#pragma once

#include <cstddef>
#include <random>
#include <span>
#include <vector>

#include "tsallis/mdp.hpp"

namespace oracles {

/// -p ln_q(p) summed over entries, written out from the raw formula.
double entropy_reference(std::span<const double> probs, double q);

/**
 * Exhaustive maximization of E_P[f] + S_q(P) over the probability simplex
 * on a regular grid with the given step (supports 1 to 3 outcomes).
 * Returns the best objective value found.
 */
double simplex_grid_maximum(std::span<const double> f, double q, double step);

/// Euclidean projection of z onto the simplex by bisecting the shift
/// threshold tau in sum_i [z_i - tau]_+ = 1.
std::vector<double> project_simplex_bisection(std::span<const double> z);

/**
 * Brute-force quadratic program: minimizes ||p - z||^2 over the simplex by
 * grid search with successive refinement until the grid step falls below
 * `final_step`. Supports up to 4 coordinates.
 */
std::vector<double> project_simplex_grid_refinement(std::span<const double> z,
                                                    double final_step = 1e-6);

/// Soft (log-sum-exp) value iteration at entropy coefficient alpha;
/// the q = 1 reference for the optimality backup. Returns the Q table.
tsallis::QFunction soft_value_iteration(const tsallis::TabularMdp& mdp, double alpha,
                                        double tolerance = 1e-12);

/**
 * Direct linear solve of the expectation equation for a fixed policy:
 * V = (I - gamma P_pi)^{-1} (r_pi + alpha * h_pi) with h_pi the per-state
 * policy entropy, then Q = r + gamma P V.
 */
tsallis::QFunction tbe_linear_solve(const tsallis::TabularMdp& mdp,
                                    const tsallis::StationaryPolicy& pi, double q,
                                    double alpha);

// Seeded random instances.
std::vector<double> random_distribution(std::mt19937& rng, std::size_t n);
tsallis::StationaryPolicy random_policy(std::mt19937& rng, std::size_t n_states,
                                        std::size_t n_actions);
tsallis::TabularMdp random_mdp(std::mt19937& rng, std::size_t n_states,
                               std::size_t n_actions, double discount);
tsallis::QFunction random_qfunction(std::mt19937& rng, std::size_t n_states,
                                    std::size_t n_actions, double lo = -5.0,
                                    double hi = 5.0);

}  // namespace oracles
