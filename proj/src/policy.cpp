#include "repeater/policy.hpp"

#include <stdexcept>

namespace repeater {

GlobalAction Policy::decide(const ChainState& state, const ChainConfig& config,
                            RngStream& rng) const {
    const auto dist = action_distribution(state, config);
    if (dist.size() == 1) return dist.front().first;
    double draw = rng.uniform01();
    for (const auto& [action, p] : dist) {
        draw -= p;
        if (draw < 0.0) return action;
    }
    return dist.back().first;
}

namespace {

// Elementary links a swap-asap policy requests: inactive pairs whose two
// memories are free, plus active pairs older than their cutoff.
std::uint32_t swap_asap_requests(const ChainState& state, const ChainConfig& config,
                                 const std::vector<int>& cutoffs) {
    std::uint32_t mask = 0;
    for (int link = 1; link < config.node_count; ++link) {
        const int age = state.age_of(link, link + 1);
        if (age >= 0) {
            const int cutoff = cutoffs.empty() ? config.max_cutoff : cutoffs.at(link - 1);
            if (age > cutoff) mask |= 1u << (link - 1);
        } else if (!state.right_link(link) && !state.left_link(link + 1)) {
            mask |= 1u << (link - 1);
        }
    }
    return mask;
}

std::vector<std::pair<GlobalAction, double>> single(const GlobalAction& a) {
    return {{a, 1.0}};
}

}  // namespace

std::vector<std::pair<GlobalAction, double>> FixedSwapAsap::action_distribution(
    const ChainState& state, const ChainConfig& config) const {
    GlobalAction a;
    for (int node : eligible_swap_nodes(state, config)) a.swap_mask |= 1u << (node - 1);
    if (a.swap_mask) return single(a);
    a.request_mask = swap_asap_requests(state, config, cutoffs_);
    if (a.is_noop()) throw std::logic_error("swap-asap found nothing to do in a non-terminal state");
    return single(a);
}

std::vector<std::pair<GlobalAction, double>> DynamicSwapAsap::action_distribution(
    const ChainState& state, const ChainConfig& config) const {
    const auto eligible = eligible_swap_nodes(state, config);
    if (!eligible.empty()) {
        GlobalAction a;
        std::vector<Link> used;
        for (int node : eligible) {
            bool shares = false;
            for (const Link& l : used)
                if (l.touches(node)) shares = true;
            if (shares) continue;
            a.swap_mask |= 1u << (node - 1);
            for (const Link& l : state.links())
                if (l.touches(node)) used.push_back(l);
        }
        return single(a);
    }
    GlobalAction a;
    a.request_mask = swap_asap_requests(state, config, cutoffs_);
    if (a.is_noop()) throw std::logic_error("swap-asap found nothing to do in a non-terminal state");
    return single(a);
}

std::vector<std::pair<GlobalAction, double>> WaitForAll::action_distribution(
    const ChainState& state, const ChainConfig& config) const {
    bool all_elementary = true;
    for (int link = 1; link < config.node_count; ++link)
        if (!state.active(link, link + 1)) all_elementary = false;
    if (all_elementary && config.node_count > 2) {
        GlobalAction a;
        for (int node : eligible_swap_nodes(state, config)) a.swap_mask |= 1u << (node - 1);
        return single(a);
    }
    GlobalAction a;
    for (int link = 1; link < config.node_count; ++link) {
        const int age = state.age_of(link, link + 1);
        if (age >= 0) {
            // about to be discarded by the wait rule anyway: re-roll it now
            if (age == config.max_cutoff) a.request_mask |= 1u << (link - 1);
        } else if (!state.right_link(link) && !state.left_link(link + 1)) {
            a.request_mask |= 1u << (link - 1);
        }
    }
    if (a.is_noop()) {
        // stray virtual links block every free pair (off the policy's own
        // trajectory, but decide() must be total): reclaim the inactive pairs
        for (int link = 1; link < config.node_count; ++link)
            if (!state.active(link, link + 1)) a.request_mask |= 1u << (link - 1);
    }
    return single(a);
}

std::vector<std::pair<GlobalAction, double>> RandomPolicy::action_distribution(
    const ChainState& state, const ChainConfig& config) const {
    (void)state;
    (void)config;
    std::vector<std::pair<GlobalAction, double>> dist;
    dist.reserve(actions_->size());
    const double p = 1.0 / static_cast<double>(actions_->size());
    for (std::size_t k = 0; k < actions_->size(); ++k) dist.emplace_back(actions_->action(k), p);
    return dist;
}

GlobalAction RandomPolicy::decide(const ChainState& state, const ChainConfig& config,
                                  RngStream& rng) const {
    (void)state;
    (void)config;
    return actions_->action(rng.uniform_index(actions_->size()));
}

std::vector<std::pair<GlobalAction, double>> TablePolicy::action_distribution(
    const ChainState& state, const ChainConfig& config) const {
    (void)config;
    const std::size_t s = states_->index_of(state);
    return single(actions_->action(choice_.at(s)));
}

std::vector<std::pair<GlobalAction, double>> MemoryCutoffLink::action_distribution(
    const ChainState& state, const ChainConfig& config) const {
    if (config.node_count != 2)
        throw std::invalid_argument("memory-cutoff-link policy is defined for n = 2");
    GlobalAction request;
    request.request_mask = 1u;
    GlobalAction wait;  // the no-op; callers must allow it
    return single(state.active(1, 2) ? wait : request);
}

}  // namespace repeater
