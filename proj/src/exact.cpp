#include "repeater/exact.hpp"

#include <cmath>
#include <deque>
#include <limits>
#include <stdexcept>

#include "repeater/noise.hpp"
#include "repeater/transition.hpp"

namespace repeater {

namespace {

constexpr double kRowSumTolerance = 1e-9;

}  // namespace

PolicyMatrix build_policy_matrix(const Policy& policy, const StateSpace& space) {
    PolicyMatrix pm;
    pm.transient_states = space.transient_indices();
    pm.terminal_states = space.terminal_indices();

    std::vector<std::size_t> position(space.size(), 0);
    for (std::size_t k = 0; k < pm.transient_states.size(); ++k)
        position[pm.transient_states[k]] = k;
    for (std::size_t k = 0; k < pm.terminal_states.size(); ++k)
        position[pm.terminal_states[k]] = k;

    const auto nt = static_cast<Eigen::Index>(pm.transient_states.size());
    const auto nr = static_cast<Eigen::Index>(pm.terminal_states.size());
    pm.q_block = Eigen::MatrixXd::Zero(nt, nt);
    pm.r_block = Eigen::MatrixXd::Zero(nt, nr);
    pm.counted_prob = Eigen::VectorXd::Zero(nt);

    for (std::size_t row = 0; row < pm.transient_states.size(); ++row) {
        const ChainState& state = space.state(pm.transient_states[row]);
        double row_sum = 0.0;
        for (const auto& [action, pa] : policy.action_distribution(state, space.config())) {
            if (pa <= 0.0) continue;
            if (action.has_requests()) pm.counted_prob(static_cast<Eigen::Index>(row)) += pa;
            for (const StepOutcome& branch : branch_outcomes(state, action, space.config())) {
                const std::size_t idx = space.index_of(branch.next_state);
                const double w = pa * branch.probability;
                row_sum += w;
                if (space.terminal(idx))
                    pm.r_block(static_cast<Eigen::Index>(row),
                               static_cast<Eigen::Index>(position[idx])) += w;
                else
                    pm.q_block(static_cast<Eigen::Index>(row),
                               static_cast<Eigen::Index>(position[idx])) += w;
            }
        }
        if (std::abs(row_sum - 1.0) > kRowSumTolerance)
            throw std::logic_error("policy matrix row does not sum to 1");
    }
    return pm;
}

Eigen::VectorXd all_inactive_distribution(const PolicyMatrix& matrix, const StateSpace& space) {
    Eigen::VectorXd p = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(matrix.transient_states.size()));
    const std::size_t start = space.index_of(ChainState{});
    for (std::size_t k = 0; k < matrix.transient_states.size(); ++k)
        if (matrix.transient_states[k] == start) p(static_cast<Eigen::Index>(k)) = 1.0;
    return p;
}

namespace {

// Transient states reachable from the support of the initial distribution.
// Restricting the solve to these keeps unreachable non-absorbing islands
// (common in sparsely trained tables) from making the system singular.
std::vector<Eigen::Index> reachable_rows(const PolicyMatrix& matrix,
                                         const Eigen::VectorXd& initial) {
    const Eigen::Index nt = matrix.q_block.rows();
    std::vector<bool> seen(static_cast<std::size_t>(nt), false);
    std::deque<Eigen::Index> frontier;
    for (Eigen::Index i = 0; i < nt; ++i)
        if (initial(i) > 0.0) {
            seen[static_cast<std::size_t>(i)] = true;
            frontier.push_back(i);
        }
    while (!frontier.empty()) {
        const Eigen::Index i = frontier.front();
        frontier.pop_front();
        for (Eigen::Index j = 0; j < nt; ++j)
            if (matrix.q_block(i, j) > 0.0 && !seen[static_cast<std::size_t>(j)]) {
                seen[static_cast<std::size_t>(j)] = true;
                frontier.push_back(j);
            }
    }
    std::vector<Eigen::Index> rows;
    for (Eigen::Index i = 0; i < nt; ++i)
        if (seen[static_cast<std::size_t>(i)]) rows.push_back(i);
    return rows;
}

struct ReducedSystem {
    std::vector<Eigen::Index> rows;
    Eigen::FullPivLU<Eigen::MatrixXd> lu;  // of I - Q restricted to rows
    bool absorbing = false;
};

ReducedSystem reduce(const PolicyMatrix& matrix, const Eigen::VectorXd& initial) {
    ReducedSystem sys;
    sys.rows = reachable_rows(matrix, initial);
    const auto m = static_cast<Eigen::Index>(sys.rows.size());
    Eigen::MatrixXd a = Eigen::MatrixXd::Identity(m, m);
    for (Eigen::Index i = 0; i < m; ++i)
        for (Eigen::Index j = 0; j < m; ++j) a(i, j) -= matrix.q_block(sys.rows[i], sys.rows[j]);
    sys.lu.compute(a);
    sys.absorbing = sys.lu.isInvertible();
    return sys;
}

}  // namespace

double expected_waiting_exact(const PolicyMatrix& matrix, const Eigen::VectorXd& initial) {
    const ReducedSystem sys = reduce(matrix, initial);
    if (!sys.absorbing) return std::numeric_limits<double>::infinity();
    const auto m = static_cast<Eigen::Index>(sys.rows.size());
    Eigen::VectorXd cost(m);
    for (Eigen::Index i = 0; i < m; ++i) cost(i) = matrix.counted_prob(sys.rows[i]);
    const Eigen::VectorXd visits_cost = sys.lu.solve(cost);  // (I-Q) w = c
    double waiting = 0.0;
    for (Eigen::Index i = 0; i < m; ++i) waiting += initial(sys.rows[i]) * visits_cost(i);
    return waiting;
}

AbsorptionStats absorption_stats(const PolicyMatrix& matrix, const Eigen::VectorXd& initial,
                                 const StateSpace& space) {
    const ReducedSystem sys = reduce(matrix, initial);
    if (!sys.absorbing) throw std::runtime_error("policy does not absorb from the initial state");
    const auto m = static_cast<Eigen::Index>(sys.rows.size());
    Eigen::VectorXd p(m);
    for (Eigen::Index i = 0; i < m; ++i) p(i) = initial(sys.rows[i]);
    // expected visit counts y = N^T p solve (I - Q)^T y = p
    Eigen::MatrixXd a = Eigen::MatrixXd::Identity(m, m);
    for (Eigen::Index i = 0; i < m; ++i)
        for (Eigen::Index j = 0; j < m; ++j) a(i, j) -= matrix.q_block(sys.rows[j], sys.rows[i]);
    const Eigen::VectorXd visits = Eigen::FullPivLU<Eigen::MatrixXd>(a).solve(p);

    AbsorptionStats stats;
    stats.probabilities.assign(matrix.terminal_states.size(), 0.0);
    for (std::size_t t = 0; t < matrix.terminal_states.size(); ++t) {
        double prob = 0.0;
        for (Eigen::Index i = 0; i < m; ++i)
            prob += visits(i) * matrix.r_block(sys.rows[i], static_cast<Eigen::Index>(t));
        stats.probabilities[t] = prob;
    }
    const int n = space.config().node_count;
    for (std::size_t t = 0; t < matrix.terminal_states.size(); ++t) {
        const int age = space.state(matrix.terminal_states[t]).age_of(1, n);
        stats.mean_age += stats.probabilities[t] * age;
        stats.mean_fidelity +=
            stats.probabilities[t] * bell_coefficients(age, space.config().noise).fidelity();
    }
    return stats;
}

double absorption_fidelity(const PolicyMatrix& matrix, const Eigen::VectorXd& initial,
                           const StateSpace& space) {
    return absorption_stats(matrix, initial, space).mean_fidelity;
}

OptimalPolicyResult value_iteration_optimal(const StateSpace& space, const ActionSpace& actions,
                                            double tolerance, std::uint64_t max_sweeps) {
    struct Candidate {
        std::size_t action;
        double cost;
        std::vector<std::pair<std::size_t, double>> successors;  // canonical index, prob
    };
    const std::size_t ns = space.size();
    std::vector<std::vector<Candidate>> candidates(ns);

    for (std::size_t s = 0; s < ns; ++s) {
        if (space.terminal(s)) continue;
        const ChainState& state = space.state(s);
        for (std::size_t a = 0; a < actions.size(); ++a) {
            const GlobalAction& action = actions.action(a);
            Candidate c;
            c.action = a;
            c.cost = action.has_requests() ? 1.0 : 0.0;
            bool identity = true;
            for (const StepOutcome& branch : branch_outcomes(state, action, space.config())) {
                const std::size_t idx = space.index_of(branch.next_state);
                c.successors.emplace_back(idx, branch.probability);
                if (idx != s || branch.probability != 1.0) identity = false;
            }
            // a free action that provably changes nothing can never help and
            // would pin the iteration at a bogus fixed point
            if (c.cost == 0.0 && identity) continue;
            candidates[s].push_back(std::move(c));
        }
        if (candidates[s].empty())
            throw std::logic_error("state with no usable action in value iteration");
    }

    std::vector<double> value(ns, 0.0);
    std::vector<std::size_t> choice(ns, 0);
    for (std::uint64_t sweep = 0; sweep < max_sweeps; ++sweep) {
        double delta = 0.0;
        for (std::size_t s = 0; s < ns; ++s) {
            if (space.terminal(s)) continue;
            double best = std::numeric_limits<double>::infinity();
            std::size_t best_action = candidates[s].front().action;
            for (const Candidate& c : candidates[s]) {
                double v = c.cost;
                for (const auto& [idx, p] : c.successors) v += p * value[idx];
                if (v < best - 1e-15) {
                    best = v;
                    best_action = c.action;
                }
            }
            delta = std::max(delta, std::abs(best - value[s]));
            value[s] = best;
            choice[s] = best_action;
        }
        if (delta < tolerance) {
            OptimalPolicyResult result;
            result.values = value;
            result.waiting_time = value[space.index_of(ChainState{})];
            result.policy = std::make_shared<TablePolicy>(
                "optimal", std::make_shared<StateSpace>(space.config()),
                std::make_shared<ActionSpace>(space.config(), actions.include_noop()),
                std::move(choice));
            return result;
        }
    }
    throw std::runtime_error("value iteration did not converge");
}

std::vector<double> memory_cutoff_stationary(const ChainConfig& config) {
    if (config.node_count != 2)
        throw std::invalid_argument("memory_cutoff_stationary is defined for n = 2");
    const int m = config.max_cutoff;
    const double p = config.link_prob(1);
    // states: 0 = inactive, 1 + a = age a
    const Eigen::Index k = m + 2;
    Eigen::MatrixXd kernel = Eigen::MatrixXd::Zero(k, k);
    kernel(0, 1) = p;
    kernel(0, 0) = 1.0 - p;
    for (int age = 0; age <= m; ++age) {
        const int aged = wait_update(age, m);
        kernel(1 + age, aged < 0 ? 0 : 1 + aged) = 1.0;
    }
    // pi = pi K with probabilities summing to one
    Eigen::MatrixXd a = kernel.transpose() - Eigen::MatrixXd::Identity(k, k);
    a.row(k - 1).setOnes();
    Eigen::VectorXd b = Eigen::VectorXd::Zero(k);
    b(k - 1) = 1.0;
    const Eigen::VectorXd pi = a.fullPivLu().solve(b);
    return {pi.data(), pi.data() + k};
}

}  // namespace repeater
