// This file is part of tsallis-mdp, a solver library for Markov decision
// processes with Tsallis entropy regularization. Distributed under the MIT
// license; see LICENSE at the repository root.

#include "tsallis/mdp.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>
#include <string>

namespace tsallis {

namespace {
constexpr double kRowSumTolerance = 1e-9;
constexpr double kVisitationClamp = 1e-12;

void check_shape(const TabularMdp& mdp, const StationaryPolicy& pi) {
    if (pi.n_states() != mdp.n_states() || pi.n_actions() != mdp.n_actions()) {
        throw std::invalid_argument("policy shape does not match the MDP");
    }
}

// Row-stochastic state-to-state matrix under pi: M(s,s') = sum_a pi(a|s) P(s'|s,a).
Eigen::MatrixXd policy_transition_matrix(const TabularMdp& mdp, const StationaryPolicy& pi) {
    const auto n = static_cast<Eigen::Index>(mdp.n_states());
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
    for (std::size_t s = 0; s < mdp.n_states(); ++s) {
        for (std::size_t a = 0; a < mdp.n_actions(); ++a) {
            const double p = pi.prob(s, a);
            if (p == 0.0) continue;
            const auto row = mdp.transition_row(s, a);
            for (std::size_t s2 = 0; s2 < mdp.n_states(); ++s2) {
                m(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(s2)) += p * row[s2];
            }
        }
    }
    return m;
}

}  // namespace

double sup_norm_diff(const QFunction& a, const QFunction& b) {
    if (a.n_states() != b.n_states() || a.n_actions() != b.n_actions()) {
        throw std::invalid_argument("table shapes differ");
    }
    double result = 0.0;
    for (std::size_t i = 0; i < a.data().size(); ++i) {
        result = std::max(result, std::abs(a.data()[i] - b.data()[i]));
    }
    return result;
}

StationaryPolicy::StationaryPolicy(std::vector<DiscreteDistribution> rows)
    : rows_(std::move(rows)) {
    if (rows_.empty()) throw std::invalid_argument("policy needs at least one state");
    for (const auto& row : rows_) {
        if (row.size() != rows_[0].size()) {
            throw std::invalid_argument("policy rows must all have the same action count");
        }
    }
}

StationaryPolicy StationaryPolicy::uniform(std::size_t n_states, std::size_t n_actions) {
    std::vector<DiscreteDistribution> rows;
    rows.reserve(n_states);
    for (std::size_t s = 0; s < n_states; ++s) {
        rows.push_back(DiscreteDistribution::uniform(n_actions));
    }
    return StationaryPolicy(std::move(rows));
}

double sup_norm_diff(const StationaryPolicy& a, const StationaryPolicy& b) {
    if (a.n_states() != b.n_states() || a.n_actions() != b.n_actions()) {
        throw std::invalid_argument("policy shapes differ");
    }
    double result = 0.0;
    for (std::size_t s = 0; s < a.n_states(); ++s) {
        for (std::size_t act = 0; act < a.n_actions(); ++act) {
            result = std::max(result, std::abs(a.prob(s, act) - b.prob(s, act)));
        }
    }
    return result;
}

TabularMdp::TabularMdp(std::size_t n_states, std::size_t n_actions,
                       std::vector<double> transition, std::vector<double> reward,
                       double discount, DiscreteDistribution initial)
    : n_states_(n_states), n_actions_(n_actions), transition_(std::move(transition)),
      reward_(std::move(reward)), discount_(discount), initial_(std::move(initial)) {
    if (n_states_ == 0 || n_actions_ == 0) {
        throw std::invalid_argument("MDP needs at least one state and one action");
    }
    const std::size_t expected = n_states_ * n_actions_ * n_states_;
    if (transition_.size() != expected) {
        throw std::invalid_argument("transition tensor has " +
                                    std::to_string(transition_.size()) +
                                    " entries, expected " + std::to_string(expected));
    }
    if (reward_.size() != expected) {
        throw std::invalid_argument("reward tensor has " + std::to_string(reward_.size()) +
                                    " entries, expected " + std::to_string(expected));
    }
    if (!(discount_ > 0.0) || !(discount_ < 1.0)) {
        throw std::invalid_argument("discount must lie strictly inside (0,1), got " +
                                    std::to_string(discount_));
    }
    if (initial_.size() != n_states_) {
        throw std::invalid_argument("initial distribution has " +
                                    std::to_string(initial_.size()) + " entries, expected " +
                                    std::to_string(n_states_));
    }
    for (std::size_t s = 0; s < n_states_; ++s) {
        for (std::size_t a = 0; a < n_actions_; ++a) {
            const std::size_t base = (s * n_actions_ + a) * n_states_;
            double sum = 0.0;
            for (std::size_t s2 = 0; s2 < n_states_; ++s2) {
                const double p = transition_[base + s2];
                if (!std::isfinite(p) || p < 0.0) {
                    throw std::invalid_argument(
                        "transition probability (s=" + std::to_string(s) + ",a=" +
                        std::to_string(a) + ",s'=" + std::to_string(s2) +
                        ") is negative or not finite");
                }
                if (!std::isfinite(reward_[base + s2])) {
                    throw std::invalid_argument("reward (s=" + std::to_string(s) + ",a=" +
                                                std::to_string(a) + ",s'=" +
                                                std::to_string(s2) + ") is not finite");
                }
                sum += p;
            }
            if (std::abs(sum - 1.0) > kRowSumTolerance) {
                throw std::invalid_argument("transition row (s=" + std::to_string(s) +
                                            ",a=" + std::to_string(a) + ") sums to " +
                                            std::to_string(sum) + ", expected 1 within 1e-9");
            }
        }
    }
    expected_reward_ = QFunction(n_states_, n_actions_);
    for (std::size_t s = 0; s < n_states_; ++s) {
        for (std::size_t a = 0; a < n_actions_; ++a) {
            const std::size_t base = (s * n_actions_ + a) * n_states_;
            double r = 0.0;
            for (std::size_t s2 = 0; s2 < n_states_; ++s2) {
                r += transition_[base + s2] * reward_[base + s2];
            }
            expected_reward_(s, a) = r;
        }
    }
}

TabularMdp TabularMdp::from_state_action_rewards(std::size_t n_states, std::size_t n_actions,
                                                 std::vector<double> transition,
                                                 const std::vector<double>& reward_sa,
                                                 double discount,
                                                 DiscreteDistribution initial) {
    if (reward_sa.size() != n_states * n_actions) {
        throw std::invalid_argument("state-action reward table has wrong size");
    }
    std::vector<double> reward(n_states * n_actions * n_states);
    for (std::size_t s = 0; s < n_states; ++s) {
        for (std::size_t a = 0; a < n_actions; ++a) {
            for (std::size_t s2 = 0; s2 < n_states; ++s2) {
                reward[(s * n_actions + a) * n_states + s2] = reward_sa[s * n_actions + a];
            }
        }
    }
    return TabularMdp(n_states, n_actions, std::move(transition), std::move(reward),
                      discount, std::move(initial));
}

TabularMdp TabularMdp::with_scaled_rewards(double factor) const {
    std::vector<double> scaled = reward_;
    for (double& r : scaled) r *= factor;
    return TabularMdp(n_states_, n_actions_, transition_, std::move(scaled), discount_,
                      initial_);
}

double Visitation::state_mass(std::size_t s) const {
    double sum = 0.0;
    for (double v : rho_.row(s)) sum += v;
    return sum;
}

double Visitation::total_mass() const {
    double sum = 0.0;
    for (double v : rho_.data()) sum += v;
    return sum;
}

PolicyEvaluation evaluate_policy(const TabularMdp& mdp, const StationaryPolicy& pi,
                                 const EntropicIndex& q, double alpha, double tolerance,
                                 std::size_t max_iterations, const QFunction* warm_start) {
    check_shape(mdp, pi);
    const std::size_t S = mdp.n_states();
    const std::size_t A = mdp.n_actions();
    const double gamma = mdp.discount();

    // Per-state entropy bonus alpha * S_q(pi(.|s)); constant across iterations.
    std::vector<double> bonus(S);
    for (std::size_t s = 0; s < S; ++s) {
        bonus[s] = alpha * tsallis_entropy(pi.row(s), q);
    }

    QFunction f = warm_start ? *warm_start : QFunction(S, A, 0.0);
    if (f.n_states() != S || f.n_actions() != A) {
        throw std::invalid_argument("warm start table has wrong shape");
    }

    VFunction v(S, 0.0);
    double residual = 0.0;
    std::size_t applications = 0;
    while (applications < max_iterations) {
        for (std::size_t s = 0; s < S; ++s) {
            double ev = bonus[s];
            for (std::size_t a = 0; a < A; ++a) {
                ev += pi.prob(s, a) * f(s, a);
            }
            v[s] = ev;
        }
        residual = 0.0;
        for (std::size_t s = 0; s < S; ++s) {
            for (std::size_t a = 0; a < A; ++a) {
                const auto row = mdp.transition_row(s, a);
                double next = 0.0;
                for (std::size_t s2 = 0; s2 < S; ++s2) next += row[s2] * v[s2];
                const double updated = mdp.expected_reward(s, a) + gamma * next;
                residual = std::max(residual, std::abs(updated - f(s, a)));
                f(s, a) = updated;
            }
        }
        ++applications;
        if (residual <= tolerance) break;
    }
    // Final V consistent with the returned Q.
    for (std::size_t s = 0; s < S; ++s) {
        double ev = bonus[s];
        for (std::size_t a = 0; a < A; ++a) ev += pi.prob(s, a) * f(s, a);
        v[s] = ev;
    }
    return PolicyEvaluation{std::move(v), std::move(f), applications, residual};
}

double discounted_return(const TabularMdp& mdp, const StationaryPolicy& pi) {
    check_shape(mdp, pi);
    const auto n = static_cast<Eigen::Index>(mdp.n_states());
    const Eigen::MatrixXd m = policy_transition_matrix(mdp, pi);
    Eigen::VectorXd r = Eigen::VectorXd::Zero(n);
    for (std::size_t s = 0; s < mdp.n_states(); ++s) {
        for (std::size_t a = 0; a < mdp.n_actions(); ++a) {
            r(static_cast<Eigen::Index>(s)) += pi.prob(s, a) * mdp.expected_reward(s, a);
        }
    }
    const Eigen::MatrixXd system =
        Eigen::MatrixXd::Identity(n, n) - mdp.discount() * m;
    const Eigen::VectorXd v = system.partialPivLu().solve(r);
    double j = 0.0;
    for (std::size_t s = 0; s < mdp.n_states(); ++s) {
        j += mdp.initial()[s] * v(static_cast<Eigen::Index>(s));
    }
    return j;
}

Visitation compute_visitation(const TabularMdp& mdp, const StationaryPolicy& pi) {
    check_shape(mdp, pi);
    const auto n = static_cast<Eigen::Index>(mdp.n_states());
    const Eigen::MatrixXd m = policy_transition_matrix(mdp, pi);
    Eigen::VectorXd d(n);
    for (std::size_t s = 0; s < mdp.n_states(); ++s) {
        d(static_cast<Eigen::Index>(s)) = mdp.initial()[s];
    }
    // State-level flow: rho = d + gamma * M^T rho.
    const Eigen::MatrixXd system =
        Eigen::MatrixXd::Identity(n, n) - mdp.discount() * m.transpose();
    const Eigen::PartialPivLU<Eigen::MatrixXd> lu(system);
    const Eigen::VectorXd rho_state = lu.solve(d);
    const double solve_residual = (system * rho_state - d).cwiseAbs().maxCoeff();
    if (!rho_state.allFinite() || solve_residual > 1e-8) {
        throw std::runtime_error("Bellman flow system is singular or ill-conditioned; "
                                 "transition kernel is malformed");
    }

    QFunction rho(mdp.n_states(), mdp.n_actions());
    for (std::size_t s = 0; s < mdp.n_states(); ++s) {
        const double mass = rho_state(static_cast<Eigen::Index>(s));
        for (std::size_t a = 0; a < mdp.n_actions(); ++a) {
            double value = mass * pi.prob(s, a);
            if (value < 0.0) {
                if (value < -kVisitationClamp) {
                    throw std::runtime_error("negative visitation mass at state " +
                                             std::to_string(s));
                }
                value = 0.0;
            }
            rho(s, a) = value;
        }
    }
    return Visitation(std::move(rho));
}

StationaryPolicy policy_from_visitation(const Visitation& rho) {
    std::vector<DiscreteDistribution> rows;
    rows.reserve(rho.n_states());
    for (std::size_t s = 0; s < rho.n_states(); ++s) {
        const double mass = rho.state_mass(s);
        if (mass <= kVisitationClamp) {
            rows.push_back(DiscreteDistribution::uniform(rho.n_actions()));
            continue;
        }
        std::vector<double> row(rho.n_actions());
        for (std::size_t a = 0; a < rho.n_actions(); ++a) row[a] = rho(s, a) / mass;
        rows.push_back(DiscreteDistribution(std::move(row)));
    }
    return StationaryPolicy(std::move(rows));
}

double discounted_tsallis_entropy(const TabularMdp& mdp, const StationaryPolicy& pi,
                                  const EntropicIndex& q) {
    check_shape(mdp, pi);
    const Visitation rho = compute_visitation(mdp, pi);
    double total = 0.0;
    for (std::size_t s = 0; s < mdp.n_states(); ++s) {
        total += rho.state_mass(s) * tsallis_entropy(pi.row(s), q);
    }
    return total;
}

}  // namespace tsallis
