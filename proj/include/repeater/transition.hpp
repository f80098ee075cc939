#pragma once

#include <optional>
#include <vector>

#include "repeater/action.hpp"
#include "repeater/chain.hpp"
#include "repeater/rng.hpp"

namespace repeater {

struct StepOutcome {
    ChainState next_state;
    int time_consumed = 0;       // 1 iff the action contained a link request
    double probability = 1.0;    // branch weight in branching mode
    // Set when a successful swap produced the end-to-end link with summed age
    // above the cutoff. The link is discarded from next_state (the strict
    // rule), but simulation harnesses measuring the raw end-to-end age can
    // read it here.
    std::optional<int> endnode_overflow_age;
};

// Age evolution of a waited link: -1 + ((age + 2) mod (m* + 2)). Discards at
// the cutoff, keeps inactive links inactive.
int wait_update(int age, int m_star);

// Age of the link produced by a swap: the parents' sum when the swap succeeds
// and the sum is within the cutoff, -1 otherwise.
int swap_update(int age1, int age2, int m_star, bool success);

// One stochastic step of the chain:
//   1. if the action requests any elementary link, age every link
//   2. resolve requests (each discards whatever occupies the pair's memories,
//      then succeeds with the link's probability)
//   3. resolve swaps left to right; a swap consumes the node's two links and
//      merges them with probability p_sw, a node holding one link loses it,
//      a node holding none is untouched
// Steps containing only swaps take no time and trigger no aging.
StepOutcome step(const ChainState& state, const GlobalAction& action,
                 const ChainConfig& config, RngStream& rng);

// Exhaustive branch distribution of `step` over all request and swap
// outcomes, merged by next state (strict rule for the end-node overflow) and
// sorted by state for determinism. Probabilities sum to 1.
std::vector<StepOutcome> branch_outcomes(const ChainState& state, const GlobalAction& action,
                                         const ChainConfig& config);

}  // namespace repeater
