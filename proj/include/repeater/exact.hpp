#pragma once

#include <memory>
#include <vector>

#include <Eigen/Dense>

#include "repeater/action.hpp"
#include "repeater/chain.hpp"
#include "repeater/policy.hpp"

namespace repeater {

// Per-policy-step transition kernel split into transient and terminal blocks,
// in canonical state order. Every row of [Q | R] sums to one. counted_prob[s]
// is the probability that the policy's step out of s contains an elementary
// link request, i.e. the expected counted time spent per chain step; swap-only
// steps are free, so the expected waiting time weights visits by this vector
// instead of telescoping the free steps away.
struct PolicyMatrix {
    Eigen::MatrixXd q_block;       // transient -> transient
    Eigen::MatrixXd r_block;       // transient -> terminal
    Eigen::VectorXd counted_prob;  // per transient state
    std::vector<std::size_t> transient_states;  // canonical indices
    std::vector<std::size_t> terminal_states;
};

PolicyMatrix build_policy_matrix(const Policy& policy, const StateSpace& space);

// Point mass on the all-inactive state, expressed over the transient block.
Eigen::VectorXd all_inactive_distribution(const PolicyMatrix& matrix, const StateSpace& space);

// Expected counted waiting time W = sum_s initial(s) * (N c)(s) with
// N = (I - Q)^(-1), solved as a linear system restricted to the states
// reachable from the initial distribution. Policies that cannot reach a
// terminal state from the start yield infinity.
double expected_waiting_exact(const PolicyMatrix& matrix, const Eigen::VectorXd& initial);

struct AbsorptionStats {
    std::vector<double> probabilities;  // per terminal state, sums to 1
    double mean_age = 0.0;              // end-to-end age at absorption
    double mean_fidelity = 0.0;         // via the config's noise model
};

AbsorptionStats absorption_stats(const PolicyMatrix& matrix, const Eigen::VectorXd& initial,
                                 const StateSpace& space);

// Absorption-weighted end-to-end fidelity of an absorbing policy.
double absorption_fidelity(const PolicyMatrix& matrix, const Eigen::VectorXd& initial,
                           const StateSpace& space);

struct OptimalPolicyResult {
    std::shared_ptr<TablePolicy> policy;
    double waiting_time = 0.0;  // from the all-inactive state
    std::vector<double> values;  // expected counted steps per canonical state
};

// Minimum expected counted waiting time via value iteration over the full
// branch distributions. Swap-only actions cost nothing; pure no-progress
// actions are skipped (they can never improve the objective and would stall
// the iteration).
OptimalPolicyResult value_iteration_optimal(const StateSpace& space, const ActionSpace& actions,
                                            double tolerance = 1e-10,
                                            std::uint64_t max_sweeps = 1'000'000);

// Stationary distribution of the regenerative single-link chain under the
// memory-cutoff policy: states {inactive, age 0, ..., age m*}; request when
// inactive, hold otherwise, with the wait rule discarding at the cutoff.
std::vector<double> memory_cutoff_stationary(const ChainConfig& config);

}  // namespace repeater
