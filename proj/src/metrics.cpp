#include "repeater/metrics.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "repeater/noise.hpp"
#include "repeater/transition.hpp"

namespace repeater {

namespace {

int worker_count() {
    unsigned hw = std::thread::hardware_concurrency();
    if (hw == 0) hw = 1;
    if (const char* env = std::getenv("REPEATER_LAB_THREADS")) {
        const long cap = std::strtol(env, nullptr, 10);
        if (cap >= 1 && static_cast<unsigned>(cap) < hw) hw = static_cast<unsigned>(cap);
    }
    return static_cast<int>(hw);
}

// runs f(b) for b in [0, count), fanning out across workers
void parallel_batches(std::uint64_t count, const std::function<void(std::uint64_t)>& f) {
    const int workers = std::min<std::uint64_t>(worker_count(), count);
    if (workers <= 1) {
        for (std::uint64_t b = 0; b < count; ++b) f(b);
        return;
    }
    std::atomic<std::uint64_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (;;) {
                const std::uint64_t b = next.fetch_add(1);
                if (b >= count) return;
                f(b);
            }
        });
    for (auto& t : pool) t.join();
}

double end_to_end_fidelity(int age, const ChainConfig& config) {
    return bell_coefficients(age, config.noise).fidelity();
}

}  // namespace

EpisodeStats simulate_episode(const Policy& policy, const ChainConfig& config, RngStream& rng,
                              const EpisodeOptions& opts) {
    EpisodeStats stats;
    ChainState state;
    std::uint64_t policy_steps = 0;
    while (true) {
        if (is_terminal(state, config)) {
            stats.final_age = state.age_of(1, config.node_count);
            return stats;
        }
        if (static_cast<std::uint64_t>(stats.waiting_time) >= opts.max_counted_steps ||
            policy_steps >= opts.max_policy_steps) {
            stats.capped = true;
            return stats;
        }
        const GlobalAction action = policy.decide(state, config, rng);
        ++policy_steps;
        if (opts.record_trajectory) stats.trajectory.emplace_back(state, action);

        // discard bookkeeping: requests hitting an active pair, covered pairs
        // cleared by a request, and links ageing out at the cutoff
        for (const Link& l : state.links()) {
            bool requested = l.elementary() && action.requests_link(l.left);
            for (int link = 1; link < config.node_count && !requested; ++link)
                if (action.requests_link(link) && (l.left == link || l.right == link + 1))
                    requested = true;
            if (requested)
                stats.discards.push_back({{l.left, l.right}, l.age});
            else if (action.has_requests() && l.age == config.max_cutoff)
                stats.discards.push_back({{l.left, l.right}, l.age});
        }

        StepOutcome out = step(state, action, config, rng);
        stats.waiting_time += out.time_consumed;
        if (opts.relax_terminal_overflow && out.endnode_overflow_age) {
            stats.final_age = *out.endnode_overflow_age;
            return stats;
        }
        state = std::move(out.next_state);
    }
}

double BatchedEstimate::batch_std() const {
    return std_error * std::sqrt(static_cast<double>(batch_count));
}

BatchedEstimate batched_from_means(const std::vector<double>& batch_means,
                                   std::uint64_t runs_per_batch) {
    BatchedEstimate est;
    est.batch_count = batch_means.size();
    est.runs_per_batch = runs_per_batch;
    if (batch_means.empty()) return est;
    double sum = 0.0;
    for (double m : batch_means) sum += m;
    est.mean = sum / static_cast<double>(batch_means.size());
    if (batch_means.size() > 1) {
        double ss = 0.0;
        for (double m : batch_means) ss += (m - est.mean) * (m - est.mean);
        const double var = ss / static_cast<double>(batch_means.size() - 1);
        est.std_error = std::sqrt(var / static_cast<double>(batch_means.size()));
    }
    return est;
}

EvaluationResult evaluate_policy(const Policy& policy, const ChainConfig& config,
                                 std::uint64_t batches, std::uint64_t runs_per_batch,
                                 std::uint64_t seed, const EpisodeOptions& opts) {
    std::vector<double> waiting(batches), age(batches), fidelity(batches);
    std::atomic<std::uint64_t> capped{0};
    parallel_batches(batches, [&](std::uint64_t b) {
        RngStream rng = RngStream::derived(seed, b);
        double w_sum = 0.0, a_sum = 0.0, f_sum = 0.0;
        std::uint64_t kept = 0;
        for (std::uint64_t r = 0; r < runs_per_batch; ++r) {
            const EpisodeStats e = simulate_episode(policy, config, rng, opts);
            if (e.capped) {
                ++capped;
                continue;
            }
            ++kept;
            w_sum += e.waiting_time;
            a_sum += e.final_age;
            f_sum += end_to_end_fidelity(e.final_age, config);
        }
        waiting[b] = kept ? w_sum / static_cast<double>(kept) : 0.0;
        age[b] = kept ? a_sum / static_cast<double>(kept) : 0.0;
        fidelity[b] = kept ? f_sum / static_cast<double>(kept) : 0.0;
    });
    EvaluationResult result;
    result.waiting = batched_from_means(waiting, runs_per_batch);
    result.age = batched_from_means(age, runs_per_batch);
    result.fidelity = batched_from_means(fidelity, runs_per_batch);
    result.capped_episodes = capped.load();
    return result;
}

double improvement_factor(double t_policy, double t_baseline, bool literal_paper_form) {
    if (t_policy <= 0.0 || t_baseline <= 0.0)
        throw std::invalid_argument("improvement_factor needs positive waiting times");
    if (literal_paper_form) return (t_policy - t_baseline) / t_policy;
    return (t_baseline - t_policy) / t_baseline;
}

std::map<std::pair<int, int>, double> average_cutoff(const Policy& policy,
                                                     const ChainConfig& config,
                                                     std::uint64_t runs, std::uint64_t seed) {
    std::map<std::pair<int, int>, std::pair<double, std::uint64_t>> acc;
    RngStream rng(seed);
    for (std::uint64_t r = 0; r < runs; ++r) {
        const EpisodeStats e = simulate_episode(policy, config, rng);
        for (const auto& [pair, age] : e.discards) {
            acc[pair].first += age;
            acc[pair].second += 1;
        }
    }
    std::map<std::pair<int, int>, double> out;
    for (const auto& [pair, sum_count] : acc)
        out[pair] = sum_count.first / static_cast<double>(sum_count.second);
    return out;
}

std::optional<double> pearson(std::span<const double> xs, std::span<const double> ys) {
    if (xs.size() != ys.size() || xs.size() < 2)
        throw std::invalid_argument("pearson needs two sequences of equal length >= 2");
    const double n = static_cast<double>(xs.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, syy = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        syy += (ys[i] - my) * (ys[i] - my);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    if (sxx == 0.0 || syy == 0.0) return std::nullopt;
    return std::abs(sxy) / std::sqrt(sxx * syy);
}

double Observable::evaluate(const ChainState& state, const GlobalAction& action) const {
    switch (kind) {
        case Kind::action_at_node:
            return action.swaps_node(index) ? 1.0 : 0.0;
        case Kind::action_at_link:
            return action.requests_link(index) ? 1.0 : 0.0;
        case Kind::link_status:
            return state.active(index, index + 1) ? 1.0 : 0.0;
    }
    return 0.0;
}

BatchedEstimate equal_time_correlator(const Policy& policy, const StateSpace& space,
                                      Observable a, Observable b, std::uint64_t batches,
                                      std::uint64_t samples_per_batch, std::uint64_t seed) {
    const auto& transient = space.transient_indices();
    std::vector<double> batch_r(batches);
    std::vector<char> valid(batches, 0);
    parallel_batches(batches, [&](std::uint64_t bi) {
        RngStream rng = RngStream::derived(seed, bi);
        std::vector<double> xs(samples_per_batch), ys(samples_per_batch);
        for (std::uint64_t k = 0; k < samples_per_batch; ++k) {
            const ChainState& state = space.state(transient[rng.uniform_index(transient.size())]);
            const GlobalAction action = policy.decide(state, space.config(), rng);
            xs[k] = a.evaluate(state, action);
            ys[k] = b.evaluate(state, action);
        }
        if (const auto r = pearson(xs, ys)) {
            batch_r[bi] = *r;
            valid[bi] = 1;
        }
    });
    std::vector<double> kept;
    for (std::uint64_t bi = 0; bi < batches; ++bi)
        if (valid[bi]) kept.push_back(batch_r[bi]);
    return batched_from_means(kept, samples_per_batch);
}

std::vector<BatchedEstimate> unequal_time_correlator(const Policy& policy,
                                                     const ChainConfig& config, Observable a,
                                                     Observable b, int t,
                                                     const std::vector<int>& taus,
                                                     std::uint64_t batches,
                                                     std::uint64_t runs_per_batch,
                                                     std::uint64_t seed) {
    if (t < 1) throw std::invalid_argument("unequal_time_correlator needs t >= 1");
    int max_tau = 0;
    for (int tau : taus) {
        if (tau < 0) throw std::invalid_argument("tau must be non-negative");
        max_tau = std::max(max_tau, tau);
    }
    const std::size_t needed = static_cast<std::size_t>(t + max_tau);

    EpisodeOptions opts;
    opts.record_trajectory = true;
    opts.max_policy_steps = needed;  // nothing beyond step t + max(tau) is read

    std::vector<std::vector<double>> batch_r(taus.size(), std::vector<double>());
    std::vector<std::mutex> guards(taus.size());
    parallel_batches(batches, [&](std::uint64_t bi) {
        RngStream rng = RngStream::derived(seed, bi);
        std::vector<std::vector<double>> xs(taus.size()), ys(taus.size());
        for (std::uint64_t r = 0; r < runs_per_batch; ++r) {
            const EpisodeStats e = simulate_episode(policy, config, rng, opts);
            if (e.trajectory.size() < needed) continue;
            const auto& at = e.trajectory[static_cast<std::size_t>(t - 1)];
            for (std::size_t ti = 0; ti < taus.size(); ++ti) {
                const auto& bt = e.trajectory[static_cast<std::size_t>(t - 1 + taus[ti])];
                xs[ti].push_back(a.evaluate(at.first, at.second));
                ys[ti].push_back(b.evaluate(bt.first, bt.second));
            }
        }
        for (std::size_t ti = 0; ti < taus.size(); ++ti) {
            if (xs[ti].size() < 2) continue;
            if (const auto r = pearson(xs[ti], ys[ti])) {
                std::lock_guard<std::mutex> lock(guards[ti]);
                batch_r[ti].push_back(*r);
            }
        }
    });
    std::vector<BatchedEstimate> out;
    out.reserve(taus.size());
    for (std::size_t ti = 0; ti < taus.size(); ++ti)
        out.push_back(batched_from_means(batch_r[ti], runs_per_batch));
    return out;
}

}  // namespace repeater
