#pragma once

#include <cstdint>
#include <vector>

#include "repeater/chain.hpp"
#include "repeater/metrics.hpp"
#include "repeater/policy.hpp"

namespace repeater {

// Two-level policy composition: k equal segments of n nodes each run a lower
// policy; their end-to-end links become the elementary links of a (k+1)-node
// upper chain driven by an upper policy. The full chain has k(n-1)+1 nodes.
struct NestedConfig {
    ChainConfig segment;              // n-node lower-level chain
    int segment_count = 1;            // k
    std::vector<PolicyPtr> lower;     // one per segment (or a single shared entry)
    PolicyPtr upper;

    int total_nodes() const { return segment_count * (segment.node_count - 1) + 1; }
    ChainConfig upper_config() const;  // k+1 nodes, same m* and p_sw
    void validate() const;
};

struct NestedState {
    ChainState upper;
    std::vector<ChainState> segments;
    std::vector<char> pending;  // upper link requested but not yet active
};

class NestedSimulator {
  public:
    NestedSimulator(NestedConfig config, RngStream rng);

    // Advances one global counted tick: ages active upper links, evolves every
    // pending segment by one counted step (plus its free swap steps), converts
    // completed segments into upper links, then lets the upper policy act in
    // zero time while the upper state keeps changing.
    void tick();

    bool done() const { return is_terminal(state_.upper, upper_config_); }
    int waiting_time() const { return ticks_; }
    int final_age() const;
    const NestedState& state() const { return state_; }

  private:
    void upper_policy_round();
    void start_segment(int index);
    void advance_segment(int index);
    void drain_segment_swaps(int index);

    NestedConfig config_;
    ChainConfig upper_config_;
    RngStream rng_;
    NestedState state_;
    int ticks_ = 0;
    bool upper_changed_ = true;  // query the upper policy on the first round
};

struct NestedEvaluation {
    BatchedEstimate waiting;
    std::uint64_t capped_episodes = 0;
};

NestedEvaluation nested_simulate(const NestedConfig& config, std::uint64_t batches,
                                 std::uint64_t runs_per_batch, std::uint64_t seed,
                                 std::uint64_t max_ticks = 1'000'000);

}  // namespace repeater
