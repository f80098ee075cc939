#include "repeater/action.hpp"

#include <sstream>
#include <stdexcept>

namespace repeater {

nlohmann::json GlobalAction::to_json() const {
    nlohmann::json j;
    j["request"] = nlohmann::json::array();
    j["swap"] = nlohmann::json::array();
    for (int k = 0; k < 32; ++k) {
        if ((request_mask >> k) & 1u) j["request"].push_back(k + 1);
        if ((swap_mask >> k) & 1u) j["swap"].push_back(k + 1);
    }
    return j;
}

GlobalAction GlobalAction::from_json(const nlohmann::json& j) {
    GlobalAction a;
    for (int link : j.at("request").get<std::vector<int>>())
        a.request_mask |= 1u << (link - 1);
    for (int node : j.at("swap").get<std::vector<int>>())
        a.swap_mask |= 1u << (node - 1);
    return a;
}

std::string GlobalAction::to_string(int node_count) const {
    std::ostringstream os;
    for (int link = 1; link < node_count; ++link) os << (requests_link(link) ? 'R' : 'W');
    os << '|';
    for (int node = 1; node <= node_count; ++node) os << (swaps_node(node) ? 'S' : '.');
    return os.str();
}

bool validate_action(const GlobalAction& action, const ChainConfig& config, bool allow_noop) {
    const int n = config.node_count;
    if (action.request_mask >> (n - 1)) return false;      // requests beyond link n-1
    if (action.swap_mask & 1u) return false;               // node 1 has one memory side
    if (action.swap_mask >> (n - 1)) return false;         // node n likewise
    for (int v = 2; v < n; ++v) {
        if (!action.swaps_node(v)) continue;
        // a swapping node takes part in no elementary link request
        if (action.requests_link(v - 1) || action.requests_link(v)) return false;
    }
    if (!allow_noop && action.is_noop()) return false;
    return true;
}

std::vector<int> eligible_swap_nodes(const ChainState& state, const ChainConfig& config) {
    std::vector<int> nodes;
    for (int v = 2; v < config.node_count; ++v)
        if (state.degree(v) == 2) nodes.push_back(v);
    return nodes;
}

ActionSpace::ActionSpace(const ChainConfig& config, bool include_noop)
    : node_count_(config.node_count), include_noop_(include_noop) {
    const int n = node_count_;
    const std::uint32_t swap_limit = n > 2 ? (1u << (n - 2)) : 1u;
    const std::uint32_t request_limit = 1u << (n - 1);
    for (std::uint32_t interior = 0; interior < swap_limit; ++interior) {
        GlobalAction a;
        a.swap_mask = interior << 1;  // interior node v is bit v-1
        for (std::uint32_t req = 0; req < request_limit; ++req) {
            a.request_mask = req;
            if (validate_action(a, config, include_noop_)) actions_.push_back(a);
        }
    }
}

std::size_t ActionSpace::index_of(const GlobalAction& action) const {
    for (std::size_t k = 0; k < actions_.size(); ++k)
        if (actions_[k] == action) return k;
    throw std::out_of_range("action not in enumerated space");
}

}  // namespace repeater
