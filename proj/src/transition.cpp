#include "repeater/transition.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace repeater {

int wait_update(int age, int m_star) {
    if (age < -1 || age > m_star) throw std::out_of_range("wait_update: age outside [-1, m*]");
    if (age == -1) return -1;
    return -1 + ((age + 2) % (m_star + 2));
}

int swap_update(int age1, int age2, int m_star, bool success) {
    if (age1 < 0 || age2 < 0) throw std::invalid_argument("swap_update: inactive parent");
    if (!success) return -1;
    const int sum = age1 + age2;
    return sum <= m_star ? sum : -1;
}

namespace {

void check_inputs(const ChainState& state, const GlobalAction& action, const ChainConfig& config) {
    if (!validate_state(state, config)) throw std::invalid_argument("step: invalid state");
    if (!validate_action(action, config, /*allow_noop=*/true))
        throw std::invalid_argument("step: invalid action");
}

// Aging plus request-slot clearing; everything before the probabilistic part.
ChainState age_and_clear(const ChainState& state, const GlobalAction& action,
                         const ChainConfig& config) {
    ChainState next;
    if (action.has_requests()) {
        for (const Link& l : state.links()) {
            if (l.elementary() && action.requests_link(l.left))
                continue;  // replaced by the request below
            const int aged = wait_update(l.age, config.max_cutoff);
            if (aged >= 0) next.set_link(l.left, l.right, aged);
        }
    } else {
        next = state;
    }
    // a request claims both memories of its pair: drop any link occupying them
    for (int link = 1; link < config.node_count; ++link) {
        if (!action.requests_link(link)) continue;
        if (auto r = next.right_link(link)) next.remove_link(r->left, r->right);
        if (auto l = next.left_link(link + 1)) next.remove_link(l->left, l->right);
    }
    return next;
}

// Removes links whose age ran past the cutoff during swap resolution. A
// surviving overage end-to-end link is reported through the outcome instead
// of silently vanishing.
void cleanup(ChainState& s, const ChainConfig& config, std::optional<int>& overflow) {
    std::vector<Link> overage;
    for (const Link& l : s.links())
        if (l.age > config.max_cutoff) overage.push_back(l);
    for (const Link& l : overage) {
        if (l.left == 1 && l.right == config.node_count) overflow = l.age;
        s.remove_link(l.left, l.right);
    }
}

// Applies the swap at `node` given the success flag. Within a single action
// merged links carry their raw summed age so that later swaps in the same
// contiguous run see it; cleanup() enforces the cutoff afterwards.
void resolve_swap(ChainState& s, int node, bool success) {
    std::vector<Link> incident;
    for (const Link& l : s.links())
        if (l.touches(node)) incident.push_back(l);
    if (incident.empty()) return;
    if (incident.size() == 1) {
        s.remove_link(incident[0].left, incident[0].right);
        return;
    }
    const int age = incident[0].age + incident[1].age;
    const int left = std::min(incident[0].left, incident[1].left);
    const int right = std::max(incident[0].right, incident[1].right);
    s.remove_link(incident[0].left, incident[0].right);
    s.remove_link(incident[1].left, incident[1].right);
    if (success) s.set_link(left, right, age);
}

}  // namespace

StepOutcome step(const ChainState& state, const GlobalAction& action, const ChainConfig& config,
                 RngStream& rng) {
    check_inputs(state, action, config);
    StepOutcome out;
    out.time_consumed = action.has_requests() ? 1 : 0;

    ChainState s = age_and_clear(state, action, config);
    for (int link = 1; link < config.node_count; ++link)
        if (action.requests_link(link) && rng.bernoulli(config.link_prob(link)))
            s.set_link(link, link + 1, 0);
    for (int node = 2; node < config.node_count; ++node)
        if (action.swaps_node(node) && s.degree(node) > 0)
            resolve_swap(s, node, s.degree(node) == 2 ? rng.bernoulli(config.swap_prob) : false);

    cleanup(s, config, out.endnode_overflow_age);
    out.next_state = std::move(s);
    return out;
}

std::vector<StepOutcome> branch_outcomes(const ChainState& state, const GlobalAction& action,
                                         const ChainConfig& config) {
    check_inputs(state, action, config);
    const int time = action.has_requests() ? 1 : 0;

    std::vector<std::pair<ChainState, double>> partial;
    partial.emplace_back(age_and_clear(state, action, config), 1.0);

    for (int link = 1; link < config.node_count; ++link) {
        if (!action.requests_link(link)) continue;
        const double p = config.link_prob(link);
        std::vector<std::pair<ChainState, double>> next;
        next.reserve(partial.size() * 2);
        for (auto& [s, w] : partial) {
            if (p > 0.0) {
                ChainState made = s;
                made.set_link(link, link + 1, 0);
                next.emplace_back(std::move(made), w * p);
            }
            if (p < 1.0) next.emplace_back(std::move(s), w * (1.0 - p));
        }
        partial = std::move(next);
    }

    for (int node = 2; node < config.node_count; ++node) {
        if (!action.swaps_node(node)) continue;
        const double p = config.swap_prob;
        std::vector<std::pair<ChainState, double>> next;
        next.reserve(partial.size() * 2);
        for (auto& [s, w] : partial) {
            if (s.degree(node) != 2) {
                ChainState post = std::move(s);
                resolve_swap(post, node, false);  // lone link destroyed, empty node untouched
                next.emplace_back(std::move(post), w);
                continue;
            }
            if (p > 0.0) {
                ChainState merged = s;
                resolve_swap(merged, node, true);
                next.emplace_back(std::move(merged), w * p);
            }
            if (p < 1.0) {
                ChainState broken = std::move(s);
                resolve_swap(broken, node, false);
                next.emplace_back(std::move(broken), w * (1.0 - p));
            }
        }
        partial = std::move(next);
    }

    std::map<ChainState, double> merged;
    for (auto& [s, w] : partial) {
        std::optional<int> overflow;
        cleanup(s, config, overflow);
        merged[s] += w;
    }

    std::vector<StepOutcome> out;
    out.reserve(merged.size());
    for (auto& [s, w] : merged) {
        StepOutcome o;
        o.next_state = s;
        o.time_consumed = time;
        o.probability = w;
        out.push_back(std::move(o));
    }
    return out;
}

}  // namespace repeater
