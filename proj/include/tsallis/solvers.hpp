// This file is part of tsallis-mdp, a solver library for Markov decision
// processes with Tsallis entropy regularization. Distributed under the MIT
// license; see LICENSE at the repository root.

#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "tsallis/mdp.hpp"
#include "tsallis/qmax.hpp"

namespace tsallis {

/// Tolerances and iteration caps for the dynamic-programming solvers.
struct SolveOptions {
    /// Sup-norm residual on Q at which value iteration stops.
    double value_tolerance = 1e-10;
    /// Policy-change / Q-change threshold at which policy iteration stops.
    double improvement_tolerance = 1e-8;
    /// Cap on outer iterations; exceeding it raises NonConvergenceError.
    std::size_t max_iterations = 100000;
    /// Tolerance and cap for the inner policy evaluation in policy iteration.
    double evaluation_tolerance = 1e-10;
    std::size_t evaluation_max_iterations = 100000;
};

/**
 * Converged solve of a Tsallis MDP. `residuals` records the stopping
 * quantity of every outer iteration (sup-norm Q residual for value
 * iteration; min of policy change and Q change for policy iteration), and
 * `objectives` the initial-state objective sum_s d(s) V(s) per iteration.
 * `tbo_residual` is the post-hoc maximum violation of the three optimality
 * equations, reported even when large.
 */
struct SolveReport {
    QFunction q_function;
    VFunction v_function;
    StationaryPolicy policy;
    std::vector<double> residuals;
    std::vector<double> objectives;
    std::size_t iterations = 0;
    double tbo_residual = 0.0;
    std::vector<std::string> warnings;
};

/**
 * One application of the Tsallis Bellman expectation operator:
 *     [T F](s,a) = E_{s'}[ r(s,a,s') + gamma * V_F(s') ],
 *     V_F(s)    = E_{a~pi}[ F(s,a) - alpha * ln_q pi(a|s) ].
 * Satisfies T(F + c) = T(F) + gamma*c and is monotone; a gamma-contraction
 * in the sup norm.
 */
QFunction tbe_operator(const TabularMdp& mdp, const QFunction& f,
                       const StationaryPolicy& pi, const EntropicIndex& q, double alpha);

/**
 * One application of the Tsallis Bellman optimality operator, which replaces
 * the expectation over pi by the q-maximum over actions.
 */
QFunction tbo_operator(const TabularMdp& mdp, const QFunction& f, const EntropicIndex& q,
                       double alpha);

/**
 * Per state, the distribution maximizing E_{a~pi}[Q(s,a)] + alpha*S_q(pi),
 * i.e. the q-max maximizer of each row. Evaluating the returned policy
 * improves on the policy that produced Q (pointwise, up to numerical slack).
 */
StationaryPolicy policy_improvement(const TabularMdp& mdp, const QFunction& q_function,
                                    const EntropicIndex& q, double alpha);

/**
 * Tsallis policy iteration: alternates policy evaluation and q-max policy
 * improvement from the uniform policy until the policy or the Q table stops
 * changing. The inner evaluation warm-starts from the previous Q table.
 */
SolveReport tsallis_policy_iteration(const TabularMdp& mdp, const EntropicIndex& q,
                                     double alpha, const SolveOptions& options = {});

/**
 * Tsallis value iteration: repeatedly applies the optimality operator from
 * F = 0 until the sup-norm residual drops below the tolerance, then extracts
 * the optimal value via q-max and the optimal policy via the q-exponential
 * greedy distribution, recomputing the q-potential per state at the final Q.
 */
SolveReport tsallis_value_iteration(const TabularMdp& mdp, const EntropicIndex& q,
                                    double alpha, const SolveOptions& options = {});

/**
 * Maximum violation of the three optimality equations by a report:
 * |Q - E[r + gamma V]|, |V - q-max(Q)| and |pi - exp_q(Q/q - psi)|, with
 * the entropy coefficient applied consistently. Small for converged
 * reports; a truncated run shows up as a large residual.
 */
double verify_tbo(const TabularMdp& mdp, const SolveReport& report, const EntropicIndex& q,
                  double alpha);

/// Plain value iteration with the hard max backup and greedy tie-broken-by-index policy.
struct StandardSolution {
    VFunction v;
    QFunction q;
    StationaryPolicy policy;
    std::size_t iterations = 0;
};

StandardSolution standard_value_iteration(const TabularMdp& mdp, double tolerance = 1e-10,
                                          std::size_t max_iterations = 100000);

}  // namespace tsallis
