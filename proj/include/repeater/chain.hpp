#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "repeater/noise.hpp"

#include <json.hpp>

namespace repeater {

// Entangled pair between nodes left < right (1-based), stored for `age`
// counted time steps. Elementary links have right == left + 1.
struct Link {
    int left;
    int right;
    int age;

    bool elementary() const { return right == left + 1; }
    bool touches(int node) const { return node == left || node == right; }
    auto operator<=>(const Link&) const = default;
};

struct ChainConfig {
    int node_count = 2;                    // n
    int max_cutoff = 0;                    // m*
    std::vector<double> link_probs;        // size n-1; entry i-1 is link i
    double swap_prob = 1.0;                // p_sw
    PauliChannelParams noise;

    static ChainConfig homogeneous(int n, int m_star, double p_link, double p_swap);

    int link_count() const { return node_count - 1; }
    double link_prob(int link) const { return link_probs.at(link - 1); }
    bool is_homogeneous() const;
    void validate() const;  // throws std::invalid_argument

    nlohmann::json to_json() const;
    static ChainConfig from_json(const nlohmann::json& j);
    bool operator==(const ChainConfig&) const = default;
};

// Set of active links, sorted by (left, right, age). Node memories are
// directional: a node holds at most one link to its left and one to its
// right, and links never cross.
class ChainState {
  public:
    ChainState() = default;
    explicit ChainState(std::vector<Link> links);

    const std::vector<Link>& links() const { return links_; }
    bool empty() const { return links_.empty(); }

    // -1 when the pair is inactive
    int age_of(int left, int right) const;
    bool active(int left, int right) const { return age_of(left, right) >= 0; }

    // number of links incident on a node
    int degree(int node) const;
    // link occupying the node's right-facing (towards larger ids) memory
    std::optional<Link> right_link(int node) const;
    std::optional<Link> left_link(int node) const;

    void set_link(int left, int right, int age);  // replaces any (left,right) entry
    void remove_link(int left, int right);

    nlohmann::json to_json() const;
    static ChainState from_json(const nlohmann::json& j);
    std::string to_string() const;

    auto operator<=>(const ChainState&) const = default;

  private:
    std::vector<Link> links_;
};

struct ChainStateHash {
    std::size_t operator()(const ChainState& s) const;
};

bool is_terminal(const ChainState& state, const ChainConfig& config);

// True iff every structural invariant holds: links in range, ages within
// [0, m*], one left- and one right-facing memory per node, no crossings.
bool validate_state(const ChainState& state, const ChainConfig& config);

// Canonical enumeration of all valid states, ordered lexicographically over
// the sorted link triples. Index 0 is the all-inactive state.
class StateSpace {
  public:
    explicit StateSpace(const ChainConfig& config, std::size_t limit = 10'000'000);

    const ChainConfig& config() const { return config_; }
    std::size_t size() const { return states_.size(); }
    const ChainState& state(std::size_t index) const { return states_.at(index); }

    // throws std::out_of_range for states outside the enumerated space
    std::size_t index_of(const ChainState& state) const;
    bool contains(const ChainState& state) const { return index_.count(state) != 0; }

    bool terminal(std::size_t index) const { return terminal_[index]; }
    const std::vector<std::size_t>& transient_indices() const { return transient_; }
    const std::vector<std::size_t>& terminal_indices() const { return terminal_list_; }

  private:
    ChainConfig config_;
    std::vector<ChainState> states_;
    std::unordered_map<ChainState, std::size_t, ChainStateHash> index_;
    std::vector<bool> terminal_;
    std::vector<std::size_t> transient_;
    std::vector<std::size_t> terminal_list_;
};

}  // namespace repeater
