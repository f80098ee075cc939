#pragma once

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "repeater/action.hpp"
#include "repeater/chain.hpp"
#include "repeater/rng.hpp"
#include "repeater/transition.hpp"

namespace repeater {

// A policy maps a non-terminal state to a distribution over legal actions.
// Deterministic policies return a single-entry distribution; decide() samples.
class Policy {
  public:
    virtual ~Policy() = default;
    virtual std::string name() const = 0;
    virtual std::vector<std::pair<GlobalAction, double>> action_distribution(
        const ChainState& state, const ChainConfig& config) const = 0;
    virtual GlobalAction decide(const ChainState& state, const ChainConfig& config,
                                RngStream& rng) const;
};

using PolicyPtr = std::shared_ptr<const Policy>;

// swap-asap, fixed flavour: whenever any interior node holds two links, swap
// at all of them at once (an all-or-nothing contiguous run under the engine's
// left-to-right resolution). Otherwise request every elementary link whose
// memories are free, re-requesting active links once their age exceeds the
// per-link cutoff. Cutoffs default to m* (never triggered; the wait rule
// already discards there).
class FixedSwapAsap : public Policy {
  public:
    FixedSwapAsap() = default;
    explicit FixedSwapAsap(std::vector<int> cutoffs) : cutoffs_(std::move(cutoffs)) {}

    std::string name() const override { return "swap-asap-fixed"; }
    std::vector<std::pair<GlobalAction, double>> action_distribution(
        const ChainState& state, const ChainConfig& config) const override;

    const std::vector<int>& cutoffs() const { return cutoffs_; }

  private:
    std::vector<int> cutoffs_;  // empty means m* everywhere
};

// swap-asap, dynamic flavour: swaps are taken one independent set at a time
// (greedy left to right, skipping nodes that share a link with an already
// chosen node), so a failed swap never knocks out a neighbouring one in the
// same zero-time pass. Requests are as in the fixed flavour.
class DynamicSwapAsap : public Policy {
  public:
    DynamicSwapAsap() = default;
    explicit DynamicSwapAsap(std::vector<int> cutoffs) : cutoffs_(std::move(cutoffs)) {}

    std::string name() const override { return "swap-asap-dynamic"; }
    std::vector<std::pair<GlobalAction, double>> action_distribution(
        const ChainState& state, const ChainConfig& config) const override;

  private:
    std::vector<int> cutoffs_;
};

// Requests every link each counted step until all n-1 elementary links are
// simultaneously active, then swaps everywhere at once.
class WaitForAll : public Policy {
  public:
    std::string name() const override { return "wait-for-all"; }
    std::vector<std::pair<GlobalAction, double>> action_distribution(
        const ChainState& state, const ChainConfig& config) const override;
};

class RandomPolicy : public Policy {
  public:
    explicit RandomPolicy(std::shared_ptr<const ActionSpace> actions)
        : actions_(std::move(actions)) {}

    std::string name() const override { return "random"; }
    std::vector<std::pair<GlobalAction, double>> action_distribution(
        const ChainState& state, const ChainConfig& config) const override;
    GlobalAction decide(const ChainState& state, const ChainConfig& config,
                        RngStream& rng) const override;

  private:
    std::shared_ptr<const ActionSpace> actions_;
};

// Deterministic table policy: one action index per enumerated state. Used for
// greedy Q-table policies and the exact-solver optimum.
class TablePolicy : public Policy {
  public:
    TablePolicy(std::string name, std::shared_ptr<const StateSpace> states,
                std::shared_ptr<const ActionSpace> actions, std::vector<std::size_t> choice)
        : name_(std::move(name)),
          states_(std::move(states)),
          actions_(std::move(actions)),
          choice_(std::move(choice)) {}

    std::string name() const override { return name_; }
    std::vector<std::pair<GlobalAction, double>> action_distribution(
        const ChainState& state, const ChainConfig& config) const override;

    const std::vector<std::size_t>& choices() const { return choice_; }
    const StateSpace& states() const { return *states_; }
    const ActionSpace& actions() const { return *actions_; }

  private:
    std::string name_;
    std::shared_ptr<const StateSpace> states_;
    std::shared_ptr<const ActionSpace> actions_;
    std::vector<std::size_t> choice_;
};

// Elementary-link memory-cutoff policy for a two-node chain: request until
// the link exists, then hold it for m* steps. Only meaningful for n = 2 and
// used by the regenerative steady-state check.
class MemoryCutoffLink : public Policy {
  public:
    std::string name() const override { return "memory-cutoff-link"; }
    std::vector<std::pair<GlobalAction, double>> action_distribution(
        const ChainState& state, const ChainConfig& config) const override;
};

}  // namespace repeater
