// This file is part of tsallis-mdp, a solver library for Markov decision
// processes with Tsallis entropy regularization. Distributed under the MIT
// license; see LICENSE at the repository root.

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "tsallis/qmath.hpp"

namespace tsallis {

/// Dense state value table, one entry per state.
using VFunction = std::vector<double>;

/// Dense state-action value table, row-major over states.
class QFunction {
  public:
    QFunction() = default;
    QFunction(std::size_t n_states, std::size_t n_actions, double fill = 0.0)
        : n_states_(n_states), n_actions_(n_actions),
          data_(n_states * n_actions, fill) {}

    std::size_t n_states() const { return n_states_; }
    std::size_t n_actions() const { return n_actions_; }

    double& operator()(std::size_t s, std::size_t a) { return data_[s * n_actions_ + a]; }
    double operator()(std::size_t s, std::size_t a) const { return data_[s * n_actions_ + a]; }

    /// The row Q(s, .) as a view.
    std::span<const double> row(std::size_t s) const {
        return {data_.data() + s * n_actions_, n_actions_};
    }

    const std::vector<double>& data() const { return data_; }
    std::vector<double>& data() { return data_; }

  private:
    std::size_t n_states_ = 0;
    std::size_t n_actions_ = 0;
    std::vector<double> data_;
};

/// Largest absolute entrywise difference between two tables of equal shape.
double sup_norm_diff(const QFunction& a, const QFunction& b);

/// One action distribution per state.
class StationaryPolicy {
  public:
    StationaryPolicy() = default;
    explicit StationaryPolicy(std::vector<DiscreteDistribution> rows);

    static StationaryPolicy uniform(std::size_t n_states, std::size_t n_actions);

    std::size_t n_states() const { return rows_.size(); }
    std::size_t n_actions() const { return rows_.empty() ? 0 : rows_[0].size(); }

    const DiscreteDistribution& row(std::size_t s) const { return rows_[s]; }
    double prob(std::size_t s, std::size_t a) const { return rows_[s][a]; }

  private:
    std::vector<DiscreteDistribution> rows_;
};

/// Largest absolute difference over all state-action probabilities.
double sup_norm_diff(const StationaryPolicy& a, const StationaryPolicy& b);

/**
 * A finite MDP: transition kernel P(s'|s,a), reward r(s,a,s'), discount
 * in (0,1) and an initial state distribution. Immutable after construction;
 * every transition row is validated as a probability distribution and all
 * rewards must be finite.
 */
class TabularMdp {
  public:
    /// `transition` and `reward` are flattened [s][a][s'] tensors.
    TabularMdp(std::size_t n_states, std::size_t n_actions,
               std::vector<double> transition, std::vector<double> reward,
               double discount, DiscreteDistribution initial);

    /// Convenience for state-action rewards r(s,a), broadcast over s'.
    static TabularMdp from_state_action_rewards(std::size_t n_states,
                                                std::size_t n_actions,
                                                std::vector<double> transition,
                                                const std::vector<double>& reward_sa,
                                                double discount,
                                                DiscreteDistribution initial);

    std::size_t n_states() const { return n_states_; }
    std::size_t n_actions() const { return n_actions_; }
    double discount() const { return discount_; }
    const DiscreteDistribution& initial() const { return initial_; }

    double transition(std::size_t s, std::size_t a, std::size_t s2) const {
        return transition_[(s * n_actions_ + a) * n_states_ + s2];
    }
    double reward(std::size_t s, std::size_t a, std::size_t s2) const {
        return reward_[(s * n_actions_ + a) * n_states_ + s2];
    }
    std::span<const double> transition_row(std::size_t s, std::size_t a) const {
        return {transition_.data() + (s * n_actions_ + a) * n_states_, n_states_};
    }

    /// E_{s'~P}[r(s,a,s')], cached at construction.
    double expected_reward(std::size_t s, std::size_t a) const {
        return expected_reward_(s, a);
    }

    /// Copy of this MDP with every reward multiplied by `factor`.
    TabularMdp with_scaled_rewards(double factor) const;

    const std::vector<double>& transition_tensor() const { return transition_; }
    const std::vector<double>& reward_tensor() const { return reward_; }

  private:
    std::size_t n_states_;
    std::size_t n_actions_;
    std::vector<double> transition_;
    std::vector<double> reward_;
    double discount_;
    DiscreteDistribution initial_;
    QFunction expected_reward_;
};

/**
 * Discounted state-action visitation rho(s,a) = E[sum_t gamma^t 1(s_t=s,
 * a_t=a)]. Satisfies the discounted Bellman flow constraints
 *     sum_a rho(s,a) = d(s) + gamma * sum_{s',a'} P(s|s',a') rho(s',a')
 * and has total mass 1/(1-gamma).
 */
class Visitation {
  public:
    Visitation() = default;
    explicit Visitation(QFunction rho) : rho_(std::move(rho)) {}

    std::size_t n_states() const { return rho_.n_states(); }
    std::size_t n_actions() const { return rho_.n_actions(); }

    double operator()(std::size_t s, std::size_t a) const { return rho_(s, a); }
    std::span<const double> row(std::size_t s) const { return rho_.row(s); }

    /// sum_a rho(s,a)
    double state_mass(std::size_t s) const;
    /// sum_{s,a} rho(s,a); equals 1/(1-gamma) for a valid visitation
    double total_mass() const;

    const QFunction& table() const { return rho_; }

  private:
    QFunction rho_;
};

/// Value tables produced by Tsallis policy evaluation.
struct PolicyEvaluation {
    VFunction v;
    QFunction q;
    std::size_t iterations = 0;
    double residual = 0.0;
};

/**
 * Computes the unique fixed point (V_q^pi, Q_q^pi) of the Tsallis Bellman
 * expectation equation for a fixed policy by iterating the expectation
 * operator, a gamma-contraction, until the sup-norm residual drops below
 * `tolerance`. V(s) = E_{a~pi}[Q(s,a) - alpha * ln_q pi(a|s)], with
 * 0 * ln_q(0) = 0 for zero-probability actions.
 *
 * `warm_start`, when given, seeds the iteration (shape-checked).
 */
PolicyEvaluation evaluate_policy(const TabularMdp& mdp, const StationaryPolicy& pi,
                                 const EntropicIndex& q, double alpha,
                                 double tolerance = 1e-10,
                                 std::size_t max_iterations = 100000,
                                 const QFunction* warm_start = nullptr);

/**
 * Entropy-free discounted return J(pi) = sum_s d(s) V^pi(s), with V^pi from
 * a direct linear solve of the standard policy-evaluation system.
 */
double discounted_return(const TabularMdp& mdp, const StationaryPolicy& pi);

/**
 * Discounted policy entropy S_q^inf(pi) = sum_s rho_pi(s) S_q(pi(.|s)),
 * with rho_pi the discounted state visitation of pi.
 */
double discounted_tsallis_entropy(const TabularMdp& mdp, const StationaryPolicy& pi,
                                  const EntropicIndex& q);

/**
 * Solves the discounted Bellman flow system for the visitation of `pi`.
 * Negative solver noise down to -1e-12 is clamped to zero; throws if the
 * linear system turns out singular, which signals a malformed transition
 * kernel.
 */
Visitation compute_visitation(const TabularMdp& mdp, const StationaryPolicy& pi);

/**
 * Row-normalizes a visitation into the unique policy inducing it,
 * pi(a|s) = rho(s,a) / sum_a' rho(s,a'). States with zero visitation get
 * the uniform row.
 */
StationaryPolicy policy_from_visitation(const Visitation& rho);

}  // namespace tsallis
