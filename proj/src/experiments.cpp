// This file is part of tsallis-mdp, a solver library for Markov decision
// processes with Tsallis entropy regularization. Distributed under the MIT
// license; see LICENSE at the repository root.

#include "tsallis/experiments.hpp"

#include <json.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include "tsallis/qmax.hpp"
#include "tsallis/solvers.hpp"

namespace tsallis {

namespace {

constexpr double kBoundSlack = 1e-7;

std::string format_double(double value) {
    char buffer[32];
    std::snprintf(buffer, sizeof(buffer), "%.17g", value);
    return buffer;
}

struct Move {
    int dx;
    int dy;
};

// up, down, left, right, stay
constexpr std::array<Move, 5> kMoves{{{0, 1}, {0, -1}, {-1, 0}, {1, 0}, {0, 0}}};

}  // namespace

GridWorldSpec default_gridworld() {
    GridWorldSpec spec;
    spec.width = 5;
    spec.height = 5;
    spec.cell_rewards.assign(25, 0.0);
    auto cell = [&](std::size_t x, std::size_t y) -> double& {
        return spec.cell_rewards[y * spec.width + x];
    };
    cell(4, 4) = 2.0;
    cell(3, 4) = -0.5;
    cell(3, 3) = -0.5;
    cell(4, 3) = -0.5;
    spec.n_move_actions = 4;
    spec.slip_probability = 0.1;
    spec.discount = 0.9;
    spec.start_distribution.assign(25, 0.0);
    spec.start_distribution[0] = 1.0;  // cell (0, 0)
    return spec;
}

std::vector<double> bandit8_rewards() {
    // One dominant arm. At q = 100 (alpha = 1) the runner-up keeps mass of
    // roughly ln(1/gap)/(q-1), so concentrating 99.9% on the argmax needs a
    // runner-up gap above ~0.92.
    return {1.0, 0.05, 0.044, 0.038, 0.031, 0.024, 0.016, 0.0};
}

TabularMdp build_gridworld(const GridWorldSpec& spec) {
    if (spec.width == 0 || spec.height == 0) {
        throw std::invalid_argument("gridworld needs positive width and height");
    }
    const std::size_t n_cells = spec.width * spec.height;
    if (spec.cell_rewards.size() != n_cells) {
        throw std::invalid_argument("gridworld has " + std::to_string(n_cells) +
                                    " cells but " + std::to_string(spec.cell_rewards.size()) +
                                    " rewards");
    }
    if (spec.n_move_actions != 4 && spec.n_move_actions != 5) {
        throw std::invalid_argument("gridworld supports 4 or 5 actions");
    }
    if (!(spec.slip_probability >= 0.0) || spec.slip_probability >= 1.0) {
        throw std::invalid_argument("slip probability must lie in [0, 1)");
    }
    if (spec.start_distribution.size() != n_cells) {
        throw std::invalid_argument("start distribution must have one entry per cell");
    }

    const std::size_t n_actions = spec.n_move_actions;
    auto target = [&](std::size_t s, const Move& move) -> std::size_t {
        const int x = static_cast<int>(s % spec.width) + move.dx;
        const int y = static_cast<int>(s / spec.width) + move.dy;
        if (x < 0 || y < 0 || x >= static_cast<int>(spec.width) ||
            y >= static_cast<int>(spec.height)) {
            return s;  // self-loop at walls
        }
        return static_cast<std::size_t>(y) * spec.width + static_cast<std::size_t>(x);
    };

    std::vector<double> transition(n_cells * n_actions * n_cells, 0.0);
    std::vector<double> reward(n_cells * n_actions * n_cells, 0.0);
    const double off_mass =
        spec.slip_probability / static_cast<double>(n_actions - 1);
    for (std::size_t s = 0; s < n_cells; ++s) {
        for (std::size_t a = 0; a < n_actions; ++a) {
            for (std::size_t dir = 0; dir < n_actions; ++dir) {
                const double mass = dir == a ? 1.0 - spec.slip_probability : off_mass;
                if (mass == 0.0) continue;
                const std::size_t s2 = target(s, kMoves[dir]);
                transition[(s * n_actions + a) * n_cells + s2] += mass;
            }
            for (std::size_t s2 = 0; s2 < n_cells; ++s2) {
                reward[(s * n_actions + a) * n_cells + s2] = spec.cell_rewards[s2];
            }
        }
    }
    return TabularMdp(n_cells, n_actions, std::move(transition), std::move(reward),
                      spec.discount, DiscreteDistribution(spec.start_distribution));
}

double SweepResult::at(std::size_t row, const std::string& column) const {
    const auto it = std::find(columns.begin(), columns.end(), column);
    if (it == columns.end()) throw std::invalid_argument("no column named " + column);
    return rows.at(row)[static_cast<std::size_t>(it - columns.begin())];
}

std::string SweepResult::to_csv() const {
    std::ostringstream out;
    for (std::size_t c = 0; c < columns.size(); ++c) {
        if (c > 0) out << ',';
        out << columns[c];
    }
    out << '\n';
    for (const auto& row : rows) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c > 0) out << ',';
            out << format_double(row[c]);
        }
        out << '\n';
    }
    return out.str();
}

SweepResult SweepResult::from_csv(const std::string& text) {
    SweepResult result;
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw std::invalid_argument("empty CSV");
    std::istringstream header(line);
    std::string field;
    while (std::getline(header, field, ',')) result.columns.push_back(field);
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<double> row;
        std::istringstream cells(line);
        while (std::getline(cells, field, ',')) {
            std::size_t consumed = 0;
            row.push_back(std::stod(field, &consumed));
            if (consumed != field.size()) {
                throw std::invalid_argument("malformed CSV number: " + field);
            }
        }
        if (row.size() != result.columns.size()) {
            throw std::invalid_argument("CSV row width does not match header");
        }
        result.rows.push_back(std::move(row));
    }
    return result;
}

std::string SweepResult::to_json_string() const {
    nlohmann::json j;
    j["columns"] = columns;
    j["rows"] = rows;
    return j.dump(2) + "\n";
}

SweepResult SweepResult::from_json_string(const std::string& text) {
    SweepResult result;
    const nlohmann::json j = nlohmann::json::parse(text);
    result.columns = j.at("columns").get<std::vector<std::string>>();
    result.rows = j.at("rows").get<std::vector<std::vector<double>>>();
    for (const auto& row : result.rows) {
        if (row.size() != result.columns.size()) {
            throw std::invalid_argument("JSON row width does not match columns");
        }
    }
    return result;
}

SweepResult bandit_sweep(std::span<const double> rewards, std::span<const double> q_values,
                         std::span<const double> alpha_values) {
    if (rewards.empty()) throw std::invalid_argument("bandit needs a nonempty reward vector");
    SweepResult result;
    result.columns = {"q", "alpha", "value", "psi", "support_size"};
    for (std::size_t a = 0; a < rewards.size(); ++a) {
        result.columns.push_back("p" + std::to_string(a));
    }
    for (double qv : q_values) {
        const EntropicIndex q(qv);
        for (double alpha : alpha_values) {
            const QMaxResult r = q_max_with_coefficient(rewards, q, alpha);
            std::vector<double> row{qv, alpha, r.value, r.psi,
                                    static_cast<double>(r.support.size())};
            row.insert(row.end(), r.policy.begin(), r.policy.end());
            result.rows.push_back(std::move(row));
        }
    }
    return result;
}

SweepResult performance_bound_sweep(const GridWorldSpec& spec,
                                std::span<const double> q_values) {
    const TabularMdp mdp = build_gridworld(spec);
    const StandardSolution standard = standard_value_iteration(mdp);
    const double j_opt = discounted_return(mdp, standard.policy);
    const double horizon = 1.0 / (1.0 - mdp.discount());
    const double inverse_actions = 1.0 / static_cast<double>(mdp.n_actions());

    SweepResult result;
    result.columns = {"q", "J_opt", "J_tsallis", "lower_bound"};
    for (double qv : q_values) {
        const EntropicIndex q(qv);
        const SolveReport report = tsallis_value_iteration(mdp, q, 1.0);
        const double j_tsallis = discounted_return(mdp, report.policy);
        const double lower = j_opt + horizon * ln_q(inverse_actions, q);
        if (j_tsallis < lower - kBoundSlack || j_tsallis > j_opt + kBoundSlack) {
            throw std::logic_error("performance bound violated at q = " + format_double(qv) +
                                   ": " + format_double(lower) + " <= " +
                                   format_double(j_tsallis) + " <= " + format_double(j_opt));
        }
        result.rows.push_back({qv, j_opt, j_tsallis, lower});
    }
    return result;
}

SweepResult qmax_bound_sweep(double c_min, double c_max, std::size_t n_points,
                                std::span<const double> q_values) {
    if (!(c_min <= c_max) || n_points < 2) {
        throw std::invalid_argument("need c_min <= c_max and at least two grid points");
    }
    SweepResult result;
    result.columns = {"q", "c", "q_max", "max_f", "upper_bound"};
    const double step = (c_max - c_min) / static_cast<double>(n_points - 1);
    for (double qv : q_values) {
        const EntropicIndex q(qv);
        const double entropy_gap = -ln_q(0.5, q);
        for (std::size_t i = 0; i < n_points; ++i) {
            const double c = c_min + step * static_cast<double>(i);
            const std::array<double, 2> f{c, 0.0};
            const double value = q_max(f, q).value;
            const double max_f = std::max(c, 0.0);
            const double upper = max_f + entropy_gap;
            if (value < max_f - 1e-8 || value > upper + 1e-8) {
                throw std::logic_error("q-max bound violated at q = " + format_double(qv) +
                                       ", c = " + format_double(c));
            }
            result.rows.push_back({qv, c, value, max_f, upper});
        }
    }
    return result;
}

}  // namespace tsallis
