// This file is part of tsallis-mdp, a solver library for Markov decision
// processes with Tsallis entropy regularization. Distributed under the MIT
// license; see LICENSE at the repository root.

#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace tsallis {

/**
 * The entropic index q > 0 selecting a member of the Tsallis entropy family.
 *
 * q = 1 gives the Shannon-Gibbs entropy, q = 2 the sparse Tsallis entropy,
 * and q -> infinity recovers the unregularized maximum. Whether q is exactly
 * 1 or exactly 2 is decided once at construction (tolerance 1e-12) and then
 * frozen, so closed-form branches are taken deterministically everywhere the
 * index is used; iterative solvers never flip branches mid-run.
 */
class EntropicIndex {
  public:
    /// Throws std::invalid_argument unless q is finite and strictly positive.
    explicit EntropicIndex(double q);

    double value() const { return q_; }
    bool is_one() const { return is_one_; }
    bool is_two() const { return is_two_; }

  private:
    double q_;
    bool is_one_;
    bool is_two_;
};

/**
 * A probability vector over a finite set of outcomes.
 *
 * Entries must be nonnegative and sum to one within 1e-9; construction
 * rejects anything else.
 */
class DiscreteDistribution {
  public:
    explicit DiscreteDistribution(std::vector<double> probs);

    static DiscreteDistribution uniform(std::size_t n);
    /// All mass on outcome `index`.
    static DiscreteDistribution point_mass(std::size_t n, std::size_t index);

    std::size_t size() const { return probs_.size(); }
    double operator[](std::size_t i) const { return probs_[i]; }
    const std::vector<double>& probs() const { return probs_; }
    std::span<const double> span() const { return probs_; }

    /// Outcome indices carrying strictly positive probability.
    std::vector<std::size_t> support() const;

    auto begin() const { return probs_.begin(); }
    auto end() const { return probs_.end(); }

  private:
    std::vector<double> probs_;
};

/**
 * Deformed exponential: exp(x) at q = 1, otherwise
 * [1 + (q-1)x]_+ ^ (1/(q-1)).
 *
 * Total on finite inputs. For q > 1 the clamp makes the result 0 once
 * 1 + (q-1)x <= 0; for q < 1 the power diverges there and +infinity is
 * returned, which keeps the function nondecreasing.
 */
double exp_q(double x, const EntropicIndex& q);

/**
 * Deformed logarithm: log(x) at q = 1, otherwise (x^(q-1) - 1)/(q-1).
 * Inverse of exp_q where exp_q is positive. Throws std::domain_error
 * for x <= 0.
 */
double ln_q(double x, const EntropicIndex& q);

/**
 * Tsallis entropy S_q(P) = E_P[-ln_q P(X)], with the convention that
 * zero-probability outcomes contribute zero. Nonnegative for q > 0 and
 * maximized by the uniform distribution, where it equals -ln_q(1/n).
 */
double tsallis_entropy(const DiscreteDistribution& p, const EntropicIndex& q);

/// Same entropy on a raw probability vector (entries assumed valid).
double tsallis_entropy(std::span<const double> probs, const EntropicIndex& q);

}  // namespace tsallis
