#include "repeater/chain.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace repeater {

ChainConfig ChainConfig::homogeneous(int n, int m_star, double p_link, double p_swap) {
    ChainConfig c;
    c.node_count = n;
    c.max_cutoff = m_star;
    c.link_probs.assign(static_cast<std::size_t>(n - 1), p_link);
    c.swap_prob = p_swap;
    c.noise.m2_star = 5.0 * std::max(1, m_star);
    c.validate();
    return c;
}

bool ChainConfig::is_homogeneous() const {
    return std::all_of(link_probs.begin(), link_probs.end(),
                       [&](double p) { return p == link_probs.front(); });
}

void ChainConfig::validate() const {
    if (node_count < 2) throw std::invalid_argument("chain needs at least 2 nodes");
    if (max_cutoff < 0) throw std::invalid_argument("max_cutoff must be >= 0");
    if (static_cast<int>(link_probs.size()) != node_count - 1)
        throw std::invalid_argument("link_probs must have n-1 entries");
    for (double p : link_probs)
        if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("link probability outside [0,1]");
    if (!(swap_prob >= 0.0 && swap_prob <= 1.0))
        throw std::invalid_argument("swap probability outside [0,1]");
    if (!noise.valid()) throw std::invalid_argument("invalid noise parameters");
}

nlohmann::json ChainConfig::to_json() const {
    nlohmann::json j;
    j["n"] = node_count;
    j["m_star"] = max_cutoff;
    j["p_link"] = link_probs;
    j["p_sw"] = swap_prob;
    if (std::isinf(noise.m1_star))
        j["m1_star"] = "inf";
    else
        j["m1_star"] = noise.m1_star;
    j["m2_star"] = noise.m2_star;
    return j;
}

ChainConfig ChainConfig::from_json(const nlohmann::json& j) {
    ChainConfig c;
    c.node_count = j.at("n").get<int>();
    c.max_cutoff = j.at("m_star").get<int>();
    if (j.at("p_link").is_number())
        c.link_probs.assign(static_cast<std::size_t>(c.node_count - 1), j.at("p_link").get<double>());
    else
        c.link_probs = j.at("p_link").get<std::vector<double>>();
    c.swap_prob = j.at("p_sw").get<double>();
    if (j.contains("m1_star")) {
        if (j["m1_star"].is_string())
            c.noise.m1_star = std::numeric_limits<double>::infinity();
        else
            c.noise.m1_star = j["m1_star"].get<double>();
    }
    if (j.contains("m2_star"))
        c.noise.m2_star = j["m2_star"].get<double>();
    else
        c.noise.m2_star = 5.0 * std::max(1, c.max_cutoff);
    c.validate();
    return c;
}

ChainState::ChainState(std::vector<Link> links) : links_(std::move(links)) {
    std::sort(links_.begin(), links_.end());
}

int ChainState::age_of(int left, int right) const {
    for (const Link& l : links_)
        if (l.left == left && l.right == right) return l.age;
    return -1;
}

int ChainState::degree(int node) const {
    int d = 0;
    for (const Link& l : links_) d += l.touches(node);
    return d;
}

std::optional<Link> ChainState::right_link(int node) const {
    for (const Link& l : links_)
        if (l.left == node) return l;
    return std::nullopt;
}

std::optional<Link> ChainState::left_link(int node) const {
    for (const Link& l : links_)
        if (l.right == node) return l;
    return std::nullopt;
}

void ChainState::set_link(int left, int right, int age) {
    remove_link(left, right);
    Link l{left, right, age};
    links_.insert(std::upper_bound(links_.begin(), links_.end(), l), l);
}

void ChainState::remove_link(int left, int right) {
    std::erase_if(links_, [&](const Link& l) { return l.left == left && l.right == right; });
}

nlohmann::json ChainState::to_json() const {
    nlohmann::json j = nlohmann::json::array();
    for (const Link& l : links_) j.push_back({l.left, l.right, l.age});
    return j;
}

ChainState ChainState::from_json(const nlohmann::json& j) {
    std::vector<Link> links;
    for (const auto& t : j) {
        if (!t.is_array() || t.size() != 3)
            throw std::invalid_argument("state entry must be a [i, j, age] triple");
        links.push_back(Link{t[0].get<int>(), t[1].get<int>(), t[2].get<int>()});
    }
    return ChainState(std::move(links));
}

std::string ChainState::to_string() const {
    std::ostringstream os;
    os << '{';
    for (std::size_t k = 0; k < links_.size(); ++k) {
        if (k) os << ' ';
        os << '(' << links_[k].left << ',' << links_[k].right << ':' << links_[k].age << ')';
    }
    os << '}';
    return os.str();
}

std::size_t ChainStateHash::operator()(const ChainState& s) const {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    auto feed = [&h](std::uint64_t v) {
        h ^= v;
        h *= 0x100000001b3ULL;
    };
    for (const Link& l : s.links()) {
        feed(static_cast<std::uint64_t>(l.left));
        feed(static_cast<std::uint64_t>(l.right));
        feed(static_cast<std::uint64_t>(l.age + 1));
    }
    return static_cast<std::size_t>(h);
}

bool is_terminal(const ChainState& state, const ChainConfig& config) {
    return state.active(1, config.node_count);
}

namespace {

bool crossing(const Link& a, const Link& b) {
    return (a.left < b.left && b.left < a.right && a.right < b.right) ||
           (b.left < a.left && a.left < b.right && b.right < a.right);
}

}  // namespace

bool validate_state(const ChainState& state, const ChainConfig& config) {
    const auto& links = state.links();
    for (const Link& l : links) {
        if (l.left < 1 || l.right > config.node_count || l.left >= l.right) return false;
        if (l.age < 0 || l.age > config.max_cutoff) return false;
    }
    for (std::size_t a = 0; a < links.size(); ++a) {
        for (std::size_t b = a + 1; b < links.size(); ++b) {
            if (links[a].left == links[b].left || links[a].right == links[b].right)
                return false;  // a memory can hold one half of one pair
            if (crossing(links[a], links[b])) return false;
        }
    }
    return true;
}

namespace {

// Depth-first generation in lexicographic order over sorted triple lists.
// Pairs are visited in (left, right) order; each state is emitted before its
// extensions, which preserves the ordering because any extension appends a
// strictly larger triple.
void generate(const ChainConfig& config, std::size_t limit, std::vector<Link>& current,
              int start_pair, std::vector<ChainState>& out) {
    out.emplace_back(std::vector<Link>(current));
    if (out.size() > limit)
        throw std::length_error("state space exceeds enumeration limit");

    const int n = config.node_count;
    for (int pair = start_pair; pair < n * n; ++pair) {
        const int left = pair / n + 1;
        const int right = pair % n + 1;
        if (right <= left) continue;
        bool compatible = true;
        for (const Link& l : current) {
            if (l.left == left || l.right == right ||
                crossing(l, Link{left, right, 0})) {
                compatible = false;
                break;
            }
        }
        if (!compatible) continue;
        for (int age = 0; age <= config.max_cutoff; ++age) {
            current.push_back(Link{left, right, age});
            generate(config, limit, current, pair + 1, out);
            current.pop_back();
        }
    }
}

}  // namespace

StateSpace::StateSpace(const ChainConfig& config, std::size_t limit) : config_(config) {
    config_.validate();
    std::vector<Link> current;
    generate(config_, limit, current, 0, states_);
    index_.reserve(states_.size());
    terminal_.resize(states_.size());
    for (std::size_t k = 0; k < states_.size(); ++k) {
        index_.emplace(states_[k], k);
        terminal_[k] = is_terminal(states_[k], config_);
        (terminal_[k] ? terminal_list_ : transient_).push_back(k);
    }
}

std::size_t StateSpace::index_of(const ChainState& state) const {
    auto it = index_.find(state);
    if (it == index_.end())
        throw std::out_of_range("state not in enumerated space: " + state.to_string());
    return it->second;
}

}  // namespace repeater
