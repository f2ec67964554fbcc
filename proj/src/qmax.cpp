// This file is part of tsallis-mdp, a solver library for Markov decision
// processes with Tsallis entropy regularization. Distributed under the MIT
// license; see LICENSE at the repository root.

#include "tsallis/qmax.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace tsallis {

namespace {

constexpr double kBracketTolerance = 1e-12;
constexpr double kResidualTolerance = 1e-10;
constexpr int kMaxBisectionIterations = 200;

void check_payoff(std::span<const double> f) {
    if (f.empty()) throw std::invalid_argument("q-max payoff vector must be nonempty");
    for (double v : f) {
        if (!std::isfinite(v)) {
            throw std::invalid_argument("q-max payoff entries must be finite");
        }
    }
}

// Potential plus the raw (not yet renormalized) maximizing distribution.
struct PotentialSolution {
    double psi = 0.0;
    std::vector<double> policy;
};

PotentialSolution softmax_solution(std::span<const double> f) {
    const double m = *std::max_element(f.begin(), f.end());
    double sum = 0.0;
    for (double v : f) sum += std::exp(v - m);
    PotentialSolution out;
    out.psi = m + std::log(sum);
    out.policy.resize(f.size());
    for (std::size_t a = 0; a < f.size(); ++a) out.policy[a] = std::exp(f[a] - out.psi);
    return out;
}

std::vector<std::size_t> descending_order(std::span<const double> values) {
    std::vector<std::size_t> order(values.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (values[a] != values[b]) return values[a] > values[b];
        return a < b;
    });
    return order;
}

// psi_2(f/2) = 1 + (sum_{a in S} f(a)/2 - 1)/|S| with S the largest k
// (after sorting f/2 descending, ties broken by index) such that
// 1 + k*z_(k) > sum_{j<=k} z_(j); the standard sparsemax threshold scan.
PotentialSolution sparse_solution(std::span<const double> f) {
    const std::size_t n = f.size();
    const auto order = descending_order(f);
    double cumulative = 0.0;
    double support_sum = 0.0;
    std::size_t support_size = 0;
    for (std::size_t k = 1; k <= n; ++k) {
        const double z = f[order[k - 1]] / 2.0;
        cumulative += z;
        if (1.0 + static_cast<double>(k) * z > cumulative) {
            support_size = k;
            support_sum = cumulative;
        }
    }
    PotentialSolution out;
    out.psi = 1.0 + (support_sum - 1.0) / static_cast<double>(support_size);
    out.policy.resize(n);
    for (std::size_t a = 0; a < n; ++a) {
        out.policy[a] = std::max(1.0 + (f[a] / 2.0 - out.psi), 0.0);
    }
    return out;
}

// For q < 2 the normalization sum has slope at most n in psi (each term
// moves like -p^(2-q), bounded by 1 on the simplex), so bisecting psi to
// bracket width 1e-12 lands the residual well inside 1e-9.
PotentialSolution bisect_psi_solution(std::span<const double> f, const EntropicIndex& q) {
    const std::size_t n = f.size();
    const double z_max = *std::max_element(f.begin(), f.end()) / q.value();

    // At psi = z_max the argmax term alone contributes exp_q(0) = 1, so the
    // sum is >= 1; at psi = z_max - ln_q(1/n) every term is <= 1/n. The sum
    // is continuous and nonincreasing in psi.
    double lo = z_max;
    double hi = z_max - ln_q(1.0 / static_cast<double>(n), q);

    auto residual_at = [&](double psi) {
        double sum = 0.0;
        for (double v : f) sum += exp_q(v / q.value() - psi, q);
        return sum - 1.0;
    };

    double mid = lo;
    bool converged = hi <= lo;  // single outcome: ln_q(1) = 0
    for (int iter = 0; !converged && iter < kMaxBisectionIterations; ++iter) {
        mid = 0.5 * (lo + hi);
        const double r = residual_at(mid);
        if (std::abs(r) < kResidualTolerance) {
            converged = true;
            break;
        }
        if (r > 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
        if (hi - lo < kBracketTolerance) {
            mid = 0.5 * (lo + hi);
            converged = true;
        }
    }
    if (!converged) {
        throw NonConvergenceError("q-potential bisection did not converge after " +
                                  std::to_string(kMaxBisectionIterations) + " iterations");
    }
    PotentialSolution out;
    out.psi = hi <= lo ? lo : mid;
    out.policy.resize(n);
    for (std::size_t a = 0; a < n; ++a) {
        out.policy[a] = exp_q(f[a] / q.value() - out.psi, q);
    }
    return out;
}

/*
 * For q > 2 the policy entries are (q-1)-th roots of the clamped affine
 * form, so near a support boundary the normalization sum is a root-type
 * cliff in psi: its slope 1/p^(q-2) diverges and no representable psi pins
 * the boundary action's mass. Bisecting the boundary mass itself is
 * uniformly well conditioned instead.
 *
 * With z sorted descending and support {1..k}, write u for the k-th mass.
 * Then p_a(u) = (u^(q-1) + (q-1)(z_a - z_k))^(1/(q-1)) with dp_a/du =
 * (u/p_a)^(q-2) <= 1, so g(u) = sum_a p_a(u) - 1 has slope in [1, k].
 * The support is the largest k whose boundary configuration (u = 0) still
 * leaves mass to distribute: h(k) = g_k(0) + 1 < 1.
 */
PotentialSolution support_scan_solution(std::span<const double> f, const EntropicIndex& q) {
    const std::size_t n = f.size();
    const double qm1 = q.value() - 1.0;
    std::vector<double> z(n);
    for (std::size_t a = 0; a < n; ++a) z[a] = f[a] / q.value();
    const auto order = descending_order(z);

    auto mass_at_boundary = [&](std::size_t a, std::size_t k) {
        // p_a with the k-th sorted action pinned at zero mass
        return std::pow(qm1 * (z[order[a]] - z[order[k]]), 1.0 / qm1);
    };

    std::size_t support_size = 1;
    for (std::size_t k = 1; k < n; ++k) {
        double h = 0.0;
        for (std::size_t a = 0; a < k; ++a) h += mass_at_boundary(a, k);
        if (h < 1.0) {
            support_size = k + 1;
        } else {
            break;  // h(k) is nondecreasing in k
        }
    }

    const std::size_t last = support_size - 1;
    auto policy_entry = [&](std::size_t a, double u) {
        if (a == last) return u;
        const double base = std::pow(u, qm1) + qm1 * (z[order[a]] - z[order[last]]);
        return std::pow(base, 1.0 / qm1);
    };
    auto residual_at = [&](double u) {
        double sum = 0.0;
        for (std::size_t a = 0; a < support_size; ++a) sum += policy_entry(a, u);
        return sum - 1.0;
    };

    double lo = 0.0;   // residual h(k*) - 1 < 0
    double hi = 1.0;   // residual >= 0
    double u = 0.0;
    for (int iter = 0; iter < kMaxBisectionIterations; ++iter) {
        u = 0.5 * (lo + hi);
        const double r = residual_at(u);
        if (std::abs(r) < kResidualTolerance) break;
        if (r < 0.0) {
            lo = u;
        } else {
            hi = u;
        }
        // slope of the residual is at least 1, so the width bounds it
        if (hi - lo < 1e-15) {
            u = 0.5 * (lo + hi);
            break;
        }
    }

    PotentialSolution out;
    out.psi = z[order[last]] + (1.0 - std::pow(u, qm1)) / qm1;
    out.policy.assign(n, 0.0);
    for (std::size_t a = 0; a < support_size; ++a) {
        out.policy[order[a]] = policy_entry(a, u);
    }
    return out;
}

PotentialSolution solve_potential(std::span<const double> f, const EntropicIndex& q) {
    if (q.is_one()) return softmax_solution(f);
    if (q.is_two()) return sparse_solution(f);
    if (q.value() < 2.0) return bisect_psi_solution(f, q);
    return support_scan_solution(f, q);
}

}  // namespace

double solve_q_potential(std::span<const double> f, const EntropicIndex& q) {
    check_payoff(f);
    return solve_potential(f, q).psi;
}

QMaxResult q_max(std::span<const double> f, const EntropicIndex& q) {
    check_payoff(f);
    PotentialSolution solution = solve_potential(f, q);
    const std::size_t n = f.size();

    std::vector<double> policy = std::move(solution.policy);
    double sum = 0.0;
    for (double p : policy) sum += p;
    // Renormalize exactly; the solver residual leaves the raw sum off by up
    // to 1e-10, which matters for constant-shift identities downstream.
    for (double& p : policy) p /= sum;

    double expectation = 0.0;
    double potential_route = 0.0;
    for (std::size_t a = 0; a < n; ++a) {
        expectation += policy[a] * f[a];
        potential_route += policy[a] * f[a] / q.value();
    }
    potential_route = (q.value() - 1.0) * potential_route + solution.psi;

    QMaxResult result{
        .value = expectation + tsallis_entropy(std::span<const double>(policy), q),
        .policy = DiscreteDistribution(std::move(policy)),
        .psi = solution.psi,
        .support = {},
        .value_discrepancy = 0.0,
    };
    result.support = result.policy.support();
    result.value_discrepancy = std::abs(result.value - potential_route);
    return result;
}

QMaxResult q_max_with_coefficient(std::span<const double> f, const EntropicIndex& q,
                                  double alpha) {
    if (!(alpha > 0.0) || !std::isfinite(alpha)) {
        throw std::invalid_argument("entropy coefficient must be finite and > 0");
    }
    if (alpha == 1.0) return q_max(f, q);
    std::vector<double> scaled(f.begin(), f.end());
    for (double& v : scaled) v /= alpha;
    QMaxResult result = q_max(scaled, q);
    result.value *= alpha;
    result.value_discrepancy *= alpha;
    return result;
}

}  // namespace tsallis
