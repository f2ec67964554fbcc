// This file is part of tsallis-mdp, a solver library for Markov decision
// processes with Tsallis entropy regularization. Distributed under the MIT
// license; see LICENSE at the repository root.

#include "tsallis/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace tsallis {

namespace {

constexpr double kDiscrepancyWarningThreshold = 1e-6;

void check_alpha(double alpha) {
    if (!(alpha > 0.0) || !std::isfinite(alpha)) {
        throw std::invalid_argument("entropy coefficient must be finite and > 0");
    }
}

QFunction backup(const TabularMdp& mdp, const VFunction& v) {
    QFunction out(mdp.n_states(), mdp.n_actions());
    for (std::size_t s = 0; s < mdp.n_states(); ++s) {
        for (std::size_t a = 0; a < mdp.n_actions(); ++a) {
            const auto row = mdp.transition_row(s, a);
            double next = 0.0;
            for (std::size_t s2 = 0; s2 < mdp.n_states(); ++s2) next += row[s2] * v[s2];
            out(s, a) = mdp.expected_reward(s, a) + mdp.discount() * next;
        }
    }
    return out;
}

double initial_state_objective(const TabularMdp& mdp, const VFunction& v) {
    double j = 0.0;
    for (std::size_t s = 0; s < mdp.n_states(); ++s) j += mdp.initial()[s] * v[s];
    return j;
}

// Extracts (V*, pi*) rows from a converged alpha = 1 Q table and surfaces the
// q-potential double-entry check as a warning when it drifts.
struct Extraction {
    VFunction v;
    StationaryPolicy policy;
    double max_discrepancy = 0.0;
};

Extraction extract_optimal(const QFunction& q_table, const EntropicIndex& q) {
    Extraction out;
    out.v.resize(q_table.n_states());
    std::vector<DiscreteDistribution> rows;
    rows.reserve(q_table.n_states());
    for (std::size_t s = 0; s < q_table.n_states(); ++s) {
        QMaxResult r = q_max(q_table.row(s), q);
        out.v[s] = r.value;
        out.max_discrepancy = std::max(out.max_discrepancy, r.value_discrepancy);
        rows.push_back(std::move(r.policy));
    }
    out.policy = StationaryPolicy(std::move(rows));
    return out;
}

}  // namespace

QFunction tbe_operator(const TabularMdp& mdp, const QFunction& f, const StationaryPolicy& pi,
                       const EntropicIndex& q, double alpha) {
    check_alpha(alpha);
    VFunction v(mdp.n_states());
    for (std::size_t s = 0; s < mdp.n_states(); ++s) {
        double ev = alpha * tsallis_entropy(pi.row(s), q);
        for (std::size_t a = 0; a < mdp.n_actions(); ++a) ev += pi.prob(s, a) * f(s, a);
        v[s] = ev;
    }
    return backup(mdp, v);
}

QFunction tbo_operator(const TabularMdp& mdp, const QFunction& f, const EntropicIndex& q,
                       double alpha) {
    check_alpha(alpha);
    VFunction v(mdp.n_states());
    for (std::size_t s = 0; s < mdp.n_states(); ++s) {
        v[s] = q_max_with_coefficient(f.row(s), q, alpha).value;
    }
    return backup(mdp, v);
}

StationaryPolicy policy_improvement(const TabularMdp& mdp, const QFunction& q_function,
                                    const EntropicIndex& q, double alpha) {
    check_alpha(alpha);
    std::vector<DiscreteDistribution> rows;
    rows.reserve(mdp.n_states());
    for (std::size_t s = 0; s < mdp.n_states(); ++s) {
        rows.push_back(q_max_with_coefficient(q_function.row(s), q, alpha).policy);
    }
    return StationaryPolicy(std::move(rows));
}

SolveReport tsallis_value_iteration(const TabularMdp& mdp, const EntropicIndex& q,
                                    double alpha, const SolveOptions& options) {
    check_alpha(alpha);
    // Solve the alpha = 1 problem on rewards scaled by 1/alpha, then rescale.
    const TabularMdp scaled =
        alpha == 1.0 ? mdp : mdp.with_scaled_rewards(1.0 / alpha);

    SolveReport report;
    QFunction f(mdp.n_states(), mdp.n_actions(), 0.0);
    bool converged = false;
    VFunction v(mdp.n_states(), 0.0);
    while (report.iterations < options.max_iterations) {
        for (std::size_t s = 0; s < mdp.n_states(); ++s) {
            v[s] = q_max(f.row(s), q).value;
        }
        QFunction next = backup(scaled, v);
        const double residual = alpha * sup_norm_diff(next, f);
        f = std::move(next);
        ++report.iterations;
        report.residuals.push_back(residual);
        report.objectives.push_back(alpha * initial_state_objective(mdp, v));
        if (residual < options.value_tolerance) {
            converged = true;
            break;
        }
    }
    if (!converged) {
        const std::string last = report.residuals.empty()
                                     ? "n/a"
                                     : std::to_string(report.residuals.back());
        throw NonConvergenceError("Tsallis value iteration: residual " + last +
                                  " above tolerance after " +
                                  std::to_string(report.iterations) + " iterations");
    }

    Extraction extraction = extract_optimal(f, q);
    report.q_function = QFunction(mdp.n_states(), mdp.n_actions());
    for (std::size_t i = 0; i < f.data().size(); ++i) {
        report.q_function.data()[i] = alpha * f.data()[i];
    }
    report.v_function.resize(mdp.n_states());
    for (std::size_t s = 0; s < mdp.n_states(); ++s) {
        report.v_function[s] = alpha * extraction.v[s];
    }
    report.policy = std::move(extraction.policy);
    if (alpha * extraction.max_discrepancy > kDiscrepancyWarningThreshold) {
        report.warnings.push_back(
            "q-max value identity drifted by " +
            std::to_string(alpha * extraction.max_discrepancy) + " at the final Q table");
    }
    report.tbo_residual = verify_tbo(mdp, report, q, alpha);
    return report;
}

SolveReport tsallis_policy_iteration(const TabularMdp& mdp, const EntropicIndex& q,
                                     double alpha, const SolveOptions& options) {
    check_alpha(alpha);
    const TabularMdp scaled =
        alpha == 1.0 ? mdp : mdp.with_scaled_rewards(1.0 / alpha);

    SolveReport report;
    StationaryPolicy pi = StationaryPolicy::uniform(mdp.n_states(), mdp.n_actions());
    QFunction previous_q(mdp.n_states(), mdp.n_actions(), 0.0);
    PolicyEvaluation eval;
    bool converged = false;
    while (report.iterations < options.max_iterations) {
        eval = evaluate_policy(scaled, pi, q, 1.0, options.evaluation_tolerance,
                               options.evaluation_max_iterations, &previous_q);
        report.objectives.push_back(alpha * initial_state_objective(mdp, eval.v));

        StationaryPolicy improved = policy_improvement(scaled, eval.q, q, 1.0);
        const double policy_change = sup_norm_diff(improved, pi);
        // No previous evaluation to compare on the first pass.
        const double q_change =
            report.iterations == 0 ? std::numeric_limits<double>::infinity()
                                   : alpha * sup_norm_diff(eval.q, previous_q);
        const double residual = std::min(policy_change, q_change);
        ++report.iterations;
        report.residuals.push_back(residual);

        pi = std::move(improved);
        previous_q = eval.q;
        if (residual < options.improvement_tolerance) {
            converged = true;
            break;
        }
    }
    if (!converged) {
        const std::string last = report.residuals.empty()
                                     ? "n/a"
                                     : std::to_string(report.residuals.back());
        throw NonConvergenceError("Tsallis policy iteration: change " + last +
                                  " above tolerance after " +
                                  std::to_string(report.iterations) + " iterations");
    }

    Extraction extraction = extract_optimal(eval.q, q);
    report.q_function = QFunction(mdp.n_states(), mdp.n_actions());
    for (std::size_t i = 0; i < eval.q.data().size(); ++i) {
        report.q_function.data()[i] = alpha * eval.q.data()[i];
    }
    report.v_function.resize(mdp.n_states());
    for (std::size_t s = 0; s < mdp.n_states(); ++s) {
        report.v_function[s] = alpha * extraction.v[s];
    }
    report.policy = std::move(extraction.policy);
    if (alpha * extraction.max_discrepancy > kDiscrepancyWarningThreshold) {
        report.warnings.push_back(
            "q-max value identity drifted by " +
            std::to_string(alpha * extraction.max_discrepancy) + " at the final Q table");
    }
    report.tbo_residual = verify_tbo(mdp, report, q, alpha);
    return report;
}

double verify_tbo(const TabularMdp& mdp, const SolveReport& report, const EntropicIndex& q,
                  double alpha) {
    check_alpha(alpha);
    const QFunction& qf = report.q_function;
    if (qf.n_states() != mdp.n_states() || qf.n_actions() != mdp.n_actions() ||
        report.v_function.size() != mdp.n_states()) {
        throw std::invalid_argument("report shape does not match the MDP");
    }
    double residual = 0.0;
    for (std::size_t s = 0; s < mdp.n_states(); ++s) {
        const QMaxResult r = q_max_with_coefficient(qf.row(s), q, alpha);
        residual = std::max(residual, std::abs(report.v_function[s] - r.value));
        for (std::size_t a = 0; a < mdp.n_actions(); ++a) {
            residual =
                std::max(residual, std::abs(report.policy.prob(s, a) - r.policy[a]));
        }
    }
    const QFunction expected = backup(mdp, report.v_function);
    residual = std::max(residual, sup_norm_diff(expected, qf));
    return residual;
}

StandardSolution standard_value_iteration(const TabularMdp& mdp, double tolerance,
                                          std::size_t max_iterations) {
    StandardSolution solution;
    QFunction f(mdp.n_states(), mdp.n_actions(), 0.0);
    VFunction v(mdp.n_states(), 0.0);
    bool converged = false;
    while (solution.iterations < max_iterations) {
        for (std::size_t s = 0; s < mdp.n_states(); ++s) {
            const auto row = f.row(s);
            v[s] = *std::max_element(row.begin(), row.end());
        }
        QFunction next = backup(mdp, v);
        const double residual = sup_norm_diff(next, f);
        f = std::move(next);
        ++solution.iterations;
        if (residual < tolerance) {
            converged = true;
            break;
        }
    }
    if (!converged) {
        throw NonConvergenceError("standard value iteration did not reach tolerance");
    }
    solution.q = std::move(f);
    solution.v.resize(mdp.n_states());
    std::vector<DiscreteDistribution> rows;
    rows.reserve(mdp.n_states());
    for (std::size_t s = 0; s < mdp.n_states(); ++s) {
        const auto row = solution.q.row(s);
        const std::size_t best = static_cast<std::size_t>(
            std::distance(row.begin(), std::max_element(row.begin(), row.end())));
        solution.v[s] = row[best];
        rows.push_back(DiscreteDistribution::point_mass(mdp.n_actions(), best));
    }
    solution.policy = StationaryPolicy(std::move(rows));
    return solution;
}

}  // namespace tsallis
