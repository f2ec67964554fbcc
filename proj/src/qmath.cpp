// This file is part of tsallis-mdp, a solver library for Markov decision
// processes with Tsallis entropy regularization. Distributed under the MIT
// license; see LICENSE at the repository root.

#include "tsallis/qmath.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace tsallis {

namespace {
constexpr double kBranchTolerance = 1e-12;
constexpr double kSumTolerance = 1e-9;
}  // namespace

EntropicIndex::EntropicIndex(double q) {
    if (!std::isfinite(q) || q <= 0.0) {
        throw std::invalid_argument("entropic index must be finite and > 0, got " +
                                    std::to_string(q));
    }
    is_one_ = std::abs(q - 1.0) <= kBranchTolerance;
    is_two_ = std::abs(q - 2.0) <= kBranchTolerance;
    // Snap so value() and the frozen branch never disagree.
    q_ = is_one_ ? 1.0 : (is_two_ ? 2.0 : q);
}

DiscreteDistribution::DiscreteDistribution(std::vector<double> probs)
    : probs_(std::move(probs)) {
    if (probs_.empty()) {
        throw std::invalid_argument("distribution must have at least one outcome");
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < probs_.size(); ++i) {
        const double p = probs_[i];
        if (!std::isfinite(p) || p < 0.0) {
            throw std::invalid_argument("distribution entry " + std::to_string(i) +
                                        " is negative or not finite: " + std::to_string(p));
        }
        sum += p;
    }
    if (std::abs(sum - 1.0) > kSumTolerance) {
        throw std::invalid_argument("distribution sums to " + std::to_string(sum) +
                                    ", expected 1 within 1e-9");
    }
}

DiscreteDistribution DiscreteDistribution::uniform(std::size_t n) {
    if (n == 0) throw std::invalid_argument("uniform distribution needs n >= 1");
    return DiscreteDistribution(std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

DiscreteDistribution DiscreteDistribution::point_mass(std::size_t n, std::size_t index) {
    if (index >= n) throw std::invalid_argument("point mass index out of range");
    std::vector<double> p(n, 0.0);
    p[index] = 1.0;
    return DiscreteDistribution(std::move(p));
}

std::vector<std::size_t> DiscreteDistribution::support() const {
    std::vector<std::size_t> result;
    for (std::size_t i = 0; i < probs_.size(); ++i) {
        if (probs_[i] > 0.0) result.push_back(i);
    }
    return result;
}

double exp_q(double x, const EntropicIndex& q) {
    if (q.is_one()) return std::exp(x);
    const double qm1 = q.value() - 1.0;
    const double base = std::fma(qm1, x, 1.0);
    if (base <= 0.0) {
        // [.]_+ clamp; the negative exponent at q < 1 sends the limit to +inf.
        return qm1 > 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    }
    return std::pow(base, 1.0 / qm1);
}

double ln_q(double x, const EntropicIndex& q) {
    if (!(x > 0.0)) {
        throw std::domain_error("ln_q requires x > 0, got " + std::to_string(x));
    }
    if (q.is_one()) return std::log(x);
    const double qm1 = q.value() - 1.0;
    if (q.is_two()) return x - 1.0;
    // expm1 form of (x^(q-1) - 1)/(q-1); stable when q is close to 1.
    return std::expm1(qm1 * std::log(x)) / qm1;
}

double tsallis_entropy(std::span<const double> probs, const EntropicIndex& q) {
    double entropy = 0.0;
    for (double p : probs) {
        if (p > 0.0) entropy -= p * ln_q(p, q);
    }
    return entropy;
}

double tsallis_entropy(const DiscreteDistribution& p, const EntropicIndex& q) {
    return tsallis_entropy(p.span(), q);
}

}  // namespace tsallis
