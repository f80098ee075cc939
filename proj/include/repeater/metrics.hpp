#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "repeater/chain.hpp"
#include "repeater/policy.hpp"

namespace repeater {

struct EpisodeOptions {
    std::uint64_t max_counted_steps = 1'000'000;
    std::uint64_t max_policy_steps = 10'000'000;
    // §-style swap-asap measurement: let a successful final merge deliver the
    // end-to-end pair even when its summed age runs past the cutoff, and
    // report that raw sum as the final age.
    bool relax_terminal_overflow = false;
    bool record_trajectory = false;
};

struct EpisodeStats {
    int waiting_time = 0;
    int final_age = -1;
    bool capped = false;
    // age of each link at the moment it was discarded, either by a request on
    // the active pair or by ageing out at the cutoff
    std::vector<std::pair<std::pair<int, int>, int>> discards;
    // (state, action) per policy step, recorded on demand
    std::vector<std::pair<ChainState, GlobalAction>> trajectory;
};

EpisodeStats simulate_episode(const Policy& policy, const ChainConfig& config, RngStream& rng,
                              const EpisodeOptions& opts = {});

struct BatchedEstimate {
    double mean = 0.0;
    double std_error = 0.0;  // std of batch means / sqrt(batches)
    std::uint64_t batch_count = 0;
    std::uint64_t runs_per_batch = 0;

    double batch_std() const;
};

BatchedEstimate batched_from_means(const std::vector<double>& batch_means,
                                   std::uint64_t runs_per_batch);

struct EvaluationResult {
    BatchedEstimate waiting;
    BatchedEstimate age;
    BatchedEstimate fidelity;
    std::uint64_t capped_episodes = 0;
};

// Batched Monte-Carlo evaluation; batch b uses the substream derived from
// (seed, b), so results do not depend on the number of worker threads.
EvaluationResult evaluate_policy(const Policy& policy, const ChainConfig& config,
                                 std::uint64_t batches, std::uint64_t runs_per_batch,
                                 std::uint64_t seed, const EpisodeOptions& opts = {});

// (baseline - policy) / baseline: positive when the policy beats the
// baseline. literal_paper_form flips to (policy - baseline) / policy.
double improvement_factor(double t_policy, double t_baseline, bool literal_paper_form = false);

// Mean age at discard per link, over `runs` episodes.
std::map<std::pair<int, int>, double> average_cutoff(const Policy& policy,
                                                     const ChainConfig& config,
                                                     std::uint64_t runs, std::uint64_t seed);

// |pearson correlation|; empty when either sequence has zero variance.
std::optional<double> pearson(std::span<const double> xs, std::span<const double> ys);

struct Observable {
    enum class Kind { action_at_node, action_at_link, link_status };
    Kind kind;
    int index;  // node id, link id, or link id for status

    double evaluate(const ChainState& state, const GlobalAction& action) const;
};

// Correlator over uniformly sampled non-terminal states with the policy's
// action for each sample; pearson per batch.
BatchedEstimate equal_time_correlator(const Policy& policy, const StateSpace& space,
                                      Observable a, Observable b, std::uint64_t batches,
                                      std::uint64_t samples_per_batch, std::uint64_t seed);

// Correlator between observable a at policy step t and observable b at step
// t + tau along trajectories from the all-inactive state; runs shorter than
// t + tau contribute nothing.
std::vector<BatchedEstimate> unequal_time_correlator(const Policy& policy,
                                                     const ChainConfig& config, Observable a,
                                                     Observable b, int t,
                                                     const std::vector<int>& taus,
                                                     std::uint64_t batches,
                                                     std::uint64_t runs_per_batch,
                                                     std::uint64_t seed);

}  // namespace repeater
