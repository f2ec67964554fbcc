// This file is part of tsallis-mdp, a solver library for Markov decision
// processes with Tsallis entropy regularization. Distributed under the MIT
// license; see LICENSE at the repository root.

#pragma once

#include <span>
#include <stdexcept>
#include <vector>

#include "tsallis/qmath.hpp"

namespace tsallis {

/// Raised when an iterative solve fails to reach its tolerance within the
/// iteration cap.
class NonConvergenceError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/**
 * Result of the q-maximum operator applied to a payoff vector f:
 * the optimal value of max_P E_P[f] + S_q(P) over the simplex, together
 * with the maximizing distribution.
 */
struct QMaxResult {
    /// Optimal value E_policy[f] + S_q(policy).
    double value = 0.0;
    /// The maximizer, exp_q(f(a)/q - psi) renormalized to machine precision.
    DiscreteDistribution policy;
    /// q-potential solving the normalization condition for f/q. For the
    /// coefficient form this is the potential of the rescaled payoff f/alpha.
    double psi = 0.0;
    /// Outcomes with strictly positive probability.
    std::vector<std::size_t> support;
    /// Absolute gap between the primal value and the q-potential identity
    /// (q-1) sum_a f(a)/q * policy(a) + psi. A cross-check on the psi solve;
    /// anything above 1e-6 is surfaced as a solver warning.
    double value_discrepancy = 0.0;
};

/**
 * Solves the normalization condition
 *     sum_a exp_q(f(a)/q - psi) = 1
 * for the q-potential psi. Closed forms at q = 1 (log-sum-exp) and q = 2
 * (supporting-set threshold scan). For other q below 2, bracketed bisection
 * on psi until the bracket is narrower than 1e-12 or the residual is below
 * 1e-10, capped at 200 iterations. Above 2 the exp_q roots make the
 * normalization sum arbitrarily steep in psi near support boundaries, so
 * the solver instead scans for the supporting set and bisects the smallest
 * in-support probability, which bounds the residual slope between 1 and n.
 */
double solve_q_potential(std::span<const double> f, const EntropicIndex& q);

/// q-max with unit entropy coefficient: max_P E_P[f] + S_q(P).
QMaxResult q_max(std::span<const double> f, const EntropicIndex& q);

/**
 * q-max with entropy coefficient alpha > 0: max_P E_P[f] + alpha * S_q(P),
 * computed as alpha * q_max(f / alpha) with the same maximizing policy.
 */
QMaxResult q_max_with_coefficient(std::span<const double> f, const EntropicIndex& q,
                                  double alpha);

}  // namespace tsallis
