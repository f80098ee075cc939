#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "repeater/action.hpp"
#include "repeater/chain.hpp"
#include "repeater/policy.hpp"
#include "repeater/rng.hpp"

#include <json.hpp>

namespace repeater {

enum class RewardKind { waiting, fidelity };

std::string to_string(RewardKind kind);
RewardKind reward_kind_from_string(const std::string& s);

// 100 on reaching the terminal state, -1 otherwise.
double reward_waiting(const ChainState& next_state, const ChainConfig& config);

// 100 / (end-to-end age + 1) on reaching the terminal state, -1 otherwise.
// The +1 keeps the age-0 terminal (the best outcome) finite while preserving
// strict monotonicity in the age.
double reward_fidelity(const ChainState& next_state, const ChainConfig& config);

struct Hyperparams {
    double alpha = 0.01;
    double gamma = 0.8;
    // probability of taking the argmax action during training; the text's
    // epsilon, which makes the greedy choice with probability epsilon
    double greedy_prob = 0.15;
    std::uint64_t episodes = 500'000;
    std::uint64_t max_steps_per_episode = 10'000;

    void validate() const;
    nlohmann::json to_json() const;
    static Hyperparams from_json(const nlohmann::json& j);
};

// Dense |S| x |A| value table plus the metadata needed to reuse it safely.
class QTable {
  public:
    QTable(ChainConfig config, bool include_noop, Hyperparams hyper, RewardKind reward,
           std::uint64_t seed);

    double value(std::size_t state, std::size_t action) const {
        return values_[state * action_count_ + action];
    }
    double& value(std::size_t state, std::size_t action) {
        return values_[state * action_count_ + action];
    }
    std::size_t state_count() const { return state_count_; }
    std::size_t action_count() const { return action_count_; }

    // argmax over a row; ties break to the lowest action index
    std::size_t greedy_action(std::size_t state) const;

    const ChainConfig& config() const { return config_; }
    bool include_noop() const { return include_noop_; }
    const Hyperparams& hyper() const { return hyper_; }
    RewardKind reward_kind() const { return reward_; }
    std::uint64_t seed() const { return seed_; }
    std::uint64_t episodes_trained() const { return episodes_trained_; }
    void set_episodes_trained(std::uint64_t n) { episodes_trained_ = n; }

    nlohmann::json to_json() const;
    static QTable from_json(const nlohmann::json& j);

    // Greedy policy over the table. Builds the state/action spaces for the
    // stored config; `config` may differ in probabilities when transferring.
    std::shared_ptr<TablePolicy> greedy_policy(const std::string& name = "q-greedy") const;

  private:
    ChainConfig config_;
    bool include_noop_;
    Hyperparams hyper_;
    RewardKind reward_;
    std::uint64_t seed_;
    std::uint64_t episodes_trained_ = 0;
    std::size_t state_count_;
    std::size_t action_count_;
    std::vector<double> values_;
};

// One Bellman update; returns the new Q(state, action). The max over a
// terminal next state is zero.
double q_update(QTable& table, std::size_t state, std::size_t action, double reward,
                std::size_t next_state, bool next_terminal, const Hyperparams& hyper);

// Epsilon-greedy selection per the hyperparameters.
std::size_t select_action(const QTable& table, std::size_t state, const Hyperparams& hyper,
                          RngStream& rng);

// Tabular Q-learning over the chain MDP. Episodes start from a uniformly
// random non-terminal state and run until absorption or the step guard.
// Deterministic for a fixed (config, hyper, seed).
QTable train(const ChainConfig& config, const Hyperparams& hyper, RewardKind reward,
             std::uint64_t seed, bool include_noop = false);

}  // namespace repeater
