#pragma once

#include <cstdint>
#include <vector>

#include "repeater/chain.hpp"

#include <json.hpp>

namespace repeater {

// Global action: one bit per elementary link (request vs wait) and one bit
// per node (entanglement swap). Bit k-1 of request_mask is link k; bit v-1 of
// swap_mask is node v. Swaps are only ever set on interior nodes.
struct GlobalAction {
    std::uint32_t request_mask = 0;
    std::uint32_t swap_mask = 0;

    bool requests_link(int link) const { return (request_mask >> (link - 1)) & 1u; }
    bool swaps_node(int node) const { return (swap_mask >> (node - 1)) & 1u; }
    bool has_requests() const { return request_mask != 0; }
    bool is_noop() const { return request_mask == 0 && swap_mask == 0; }

    nlohmann::json to_json() const;
    static GlobalAction from_json(const nlohmann::json& j);
    std::string to_string(int node_count) const;

    auto operator<=>(const GlobalAction&) const = default;
};

// True iff the action respects the chain shape: requests only on existing
// links, swaps only at interior nodes, no node both swapping and requesting,
// and (unless allow_noop) at least one bit set.
bool validate_action(const GlobalAction& action, const ChainConfig& config,
                     bool allow_noop = false);

// Interior nodes currently holding two active links.
std::vector<int> eligible_swap_nodes(const ChainState& state, const ChainConfig& config);

// All legal global actions in a fixed canonical order: ascending swap_mask,
// then ascending request_mask. The pure wait action is excluded unless
// include_noop is set (it changes nothing under the evolution rules and
// would let learned policies stall).
class ActionSpace {
  public:
    explicit ActionSpace(const ChainConfig& config, bool include_noop = false);

    std::size_t size() const { return actions_.size(); }
    const GlobalAction& action(std::size_t index) const { return actions_.at(index); }
    std::size_t index_of(const GlobalAction& action) const;
    bool include_noop() const { return include_noop_; }
    int node_count() const { return node_count_; }

  private:
    int node_count_;
    bool include_noop_;
    std::vector<GlobalAction> actions_;
};

}  // namespace repeater
