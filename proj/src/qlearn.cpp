#include "repeater/qlearn.hpp"

#include <algorithm>
#include <stdexcept>

#include "repeater/transition.hpp"

namespace repeater {

std::string to_string(RewardKind kind) {
    return kind == RewardKind::waiting ? "waiting" : "fidelity";
}

RewardKind reward_kind_from_string(const std::string& s) {
    if (s == "waiting") return RewardKind::waiting;
    if (s == "fidelity") return RewardKind::fidelity;
    throw std::invalid_argument("unknown reward kind: " + s);
}

double reward_waiting(const ChainState& next_state, const ChainConfig& config) {
    return is_terminal(next_state, config) ? 100.0 : -1.0;
}

double reward_fidelity(const ChainState& next_state, const ChainConfig& config) {
    if (!is_terminal(next_state, config)) return -1.0;
    return 100.0 / (next_state.age_of(1, config.node_count) + 1);
}

void Hyperparams::validate() const {
    if (!(alpha > 0.0 && alpha <= 1.0)) throw std::invalid_argument("alpha outside (0,1]");
    if (!(gamma >= 0.0 && gamma <= 1.0)) throw std::invalid_argument("gamma outside [0,1]");
    if (!(greedy_prob >= 0.0 && greedy_prob <= 1.0))
        throw std::invalid_argument("greedy_prob outside [0,1]");
    if (episodes == 0) throw std::invalid_argument("episodes must be positive");
    if (max_steps_per_episode == 0) throw std::invalid_argument("max_steps_per_episode must be positive");
}

nlohmann::json Hyperparams::to_json() const {
    return {{"alpha", alpha},
            {"gamma", gamma},
            {"greedy_prob", greedy_prob},
            {"episodes", episodes},
            {"max_steps_per_episode", max_steps_per_episode}};
}

Hyperparams Hyperparams::from_json(const nlohmann::json& j) {
    Hyperparams h;
    if (j.contains("alpha")) h.alpha = j["alpha"].get<double>();
    if (j.contains("gamma")) h.gamma = j["gamma"].get<double>();
    if (j.contains("greedy_prob")) h.greedy_prob = j["greedy_prob"].get<double>();
    if (j.contains("episodes")) h.episodes = j["episodes"].get<std::uint64_t>();
    if (j.contains("max_steps_per_episode"))
        h.max_steps_per_episode = j["max_steps_per_episode"].get<std::uint64_t>();
    h.validate();
    return h;
}

QTable::QTable(ChainConfig config, bool include_noop, Hyperparams hyper, RewardKind reward,
               std::uint64_t seed)
    : config_(std::move(config)),
      include_noop_(include_noop),
      hyper_(hyper),
      reward_(reward),
      seed_(seed) {
    config_.validate();
    hyper_.validate();
    state_count_ = StateSpace(config_).size();
    action_count_ = ActionSpace(config_, include_noop_).size();
    values_.assign(state_count_ * action_count_, 0.0);
}

std::size_t QTable::greedy_action(std::size_t state) const {
    const double* row = values_.data() + state * action_count_;
    std::size_t best = 0;
    for (std::size_t a = 1; a < action_count_; ++a)
        if (row[a] > row[best]) best = a;
    return best;
}

nlohmann::json QTable::to_json() const {
    nlohmann::json j;
    j["format"] = "repeater-lab-qtable-v1";
    j["config"] = config_.to_json();
    j["include_noop"] = include_noop_;
    j["hyper"] = hyper_.to_json();
    j["reward"] = to_string(reward_);
    j["seed"] = seed_;
    j["episodes_trained"] = episodes_trained_;
    j["state_count"] = state_count_;
    j["action_count"] = action_count_;
    j["values"] = values_;
    return j;
}

QTable QTable::from_json(const nlohmann::json& j) {
    if (j.value("format", "") != "repeater-lab-qtable-v1")
        throw std::invalid_argument("not a repeater-lab Q-table file");
    QTable t(ChainConfig::from_json(j.at("config")), j.at("include_noop").get<bool>(),
             Hyperparams::from_json(j.at("hyper")),
             reward_kind_from_string(j.at("reward").get<std::string>()),
             j.at("seed").get<std::uint64_t>());
    t.episodes_trained_ = j.at("episodes_trained").get<std::uint64_t>();
    if (j.at("state_count").get<std::size_t>() != t.state_count_ ||
        j.at("action_count").get<std::size_t>() != t.action_count_)
        throw std::invalid_argument("Q-table dimensions do not match its config");
    t.values_ = j.at("values").get<std::vector<double>>();
    if (t.values_.size() != t.state_count_ * t.action_count_)
        throw std::invalid_argument("Q-table value matrix has the wrong size");
    return t;
}

std::shared_ptr<TablePolicy> QTable::greedy_policy(const std::string& name) const {
    auto states = std::make_shared<StateSpace>(config_);
    auto actions = std::make_shared<ActionSpace>(config_, include_noop_);
    std::vector<std::size_t> choice(state_count_);
    for (std::size_t s = 0; s < state_count_; ++s) choice[s] = greedy_action(s);
    return std::make_shared<TablePolicy>(name, states, actions, std::move(choice));
}

double q_update(QTable& table, std::size_t state, std::size_t action, double reward,
                std::size_t next_state, bool next_terminal, const Hyperparams& hyper) {
    if (state >= table.state_count() || action >= table.action_count() ||
        next_state >= table.state_count())
        throw std::out_of_range("q_update: index out of range");
    double best_next = 0.0;
    if (!next_terminal) {
        best_next = table.value(next_state, 0);
        for (std::size_t a = 1; a < table.action_count(); ++a)
            best_next = std::max(best_next, table.value(next_state, a));
    }
    double& q = table.value(state, action);
    q += hyper.alpha * (reward + hyper.gamma * best_next - q);
    return q;
}

std::size_t select_action(const QTable& table, std::size_t state, const Hyperparams& hyper,
                          RngStream& rng) {
    if (rng.bernoulli(hyper.greedy_prob)) return table.greedy_action(state);
    return rng.uniform_index(table.action_count());
}

QTable train(const ChainConfig& config, const Hyperparams& hyper, RewardKind reward,
             std::uint64_t seed, bool include_noop) {
    QTable table(config, include_noop, hyper, reward, seed);
    const StateSpace states(config);
    const ActionSpace actions(config, include_noop);
    const auto& transient = states.transient_indices();
    if (transient.empty()) throw std::invalid_argument("no non-terminal states to train on");

    RngStream rng(seed);
    for (std::uint64_t episode = 0; episode < hyper.episodes; ++episode) {
        std::size_t s = transient[rng.uniform_index(transient.size())];
        for (std::uint64_t t = 0; t < hyper.max_steps_per_episode; ++t) {
            const std::size_t a = select_action(table, s, hyper, rng);
            const StepOutcome out = step(states.state(s), actions.action(a), config, rng);
            const std::size_t next = states.index_of(out.next_state);
            const bool terminal = states.terminal(next);
            const double r = reward == RewardKind::waiting
                                 ? reward_waiting(out.next_state, config)
                                 : reward_fidelity(out.next_state, config);
            q_update(table, s, a, r, next, terminal, hyper);
            if (terminal) break;
            s = next;
        }
    }
    table.set_episodes_trained(hyper.episodes);
    return table;
}

}  // namespace repeater
