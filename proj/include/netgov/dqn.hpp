#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "netgov/rng.hpp"

namespace netgov::rl {

struct DqnConfig {
    double gamma = 0.99;
    double lr = 1e-3;
    int batch_size = 64;
    int buffer_capacity = 50000;
    int target_sync_interval = 500;
    int train_episodes = 2000;
    int warmup_transitions = 1000;
    int update_every = 1;
    int hidden_dim = 64;
    double eps_start = 1.0;
    double eps_end = 0.05;
    std::uint64_t seed = 0;

    void validate() const;
    bool operator==(const DqnConfig&) const = default;
};

/// Linear decay from start to end over decay_episodes, flat afterwards.
struct EpsilonSchedule {
    double start = 1.0;
    double end = 0.05;
    int decay_episodes = 1;

    double at(int episode) const;
};

/// Argmax over entries with mask[i] != 0; ties break to the lowest index.
/// Throws NoValidActionError when the mask is all-zero.
int argmax_masked(std::span<const double> q, std::span<const std::uint8_t> mask);
double max_masked(std::span<const double> q, std::span<const std::uint8_t> mask);

/// With probability eps pick uniformly among valid actions, otherwise the
/// masked argmax.
int epsilon_greedy(std::span<const double> q, std::span<const std::uint8_t> mask, double eps,
                   Rng& rng);

/// y = r                          if done
/// y = r + gamma * max_next_q     otherwise
double td_target(double reward, bool done, double gamma, double max_next_q);

}  // namespace netgov::rl
