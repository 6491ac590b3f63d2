#include "netgov/dqn.hpp"

#include <algorithm>

#include "netgov/errors.hpp"

namespace netgov::rl {

void DqnConfig::validate() const {
    if (gamma < 0.0 || gamma > 1.0) throw ConfigError("gamma must be in [0, 1]");
    if (lr <= 0.0) throw ConfigError("lr must be positive");
    if (batch_size < 1) throw ConfigError("batch_size must be >= 1");
    if (buffer_capacity < batch_size) throw ConfigError("buffer_capacity must be >= batch_size");
    if (target_sync_interval < 1) throw ConfigError("target_sync_interval must be >= 1");
    if (train_episodes < 0) throw ConfigError("train_episodes must be >= 0");
    if (warmup_transitions < batch_size) throw ConfigError("warmup_transitions must be >= batch_size");
    if (update_every < 1) throw ConfigError("update_every must be >= 1");
    if (hidden_dim < 1) throw ConfigError("hidden_dim must be >= 1");
    if (eps_start < 0.0 || eps_start > 1.0 || eps_end < 0.0 || eps_end > 1.0)
        throw ConfigError("epsilon bounds must be in [0, 1]");
}

double EpsilonSchedule::at(int episode) const {
    if (decay_episodes <= 0 || episode >= decay_episodes) return end;
    const double frac = static_cast<double>(episode) / static_cast<double>(decay_episodes);
    return start + (end - start) * frac;
}

int argmax_masked(std::span<const double> q, std::span<const std::uint8_t> mask) {
    int best = -1;
    for (std::size_t i = 0; i < q.size(); ++i) {
        if (!mask[i]) continue;
        if (best < 0 || q[i] > q[static_cast<std::size_t>(best)]) best = static_cast<int>(i);
    }
    if (best < 0) throw NoValidActionError("argmax over empty action set");
    return best;
}

double max_masked(std::span<const double> q, std::span<const std::uint8_t> mask) {
    return q[static_cast<std::size_t>(argmax_masked(q, mask))];
}

int epsilon_greedy(std::span<const double> q, std::span<const std::uint8_t> mask, double eps,
                   Rng& rng) {
    if (rng.bernoulli(eps)) {
        std::vector<int> valid;
        for (std::size_t i = 0; i < mask.size(); ++i)
            if (mask[i]) valid.push_back(static_cast<int>(i));
        if (valid.empty()) throw NoValidActionError("exploration over empty action set");
        return valid[rng.uniform_int(valid.size())];
    }
    return argmax_masked(q, mask);
}

double td_target(double reward, bool done, double gamma, double max_next_q) {
    return done ? reward : reward + gamma * max_next_q;
}

}  // namespace netgov::rl
