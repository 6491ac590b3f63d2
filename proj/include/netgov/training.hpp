#pragma once

#include <ostream>

#include "netgov/adam.hpp"
#include "netgov/agents.hpp"
#include "netgov/dqn.hpp"
#include "netgov/replay.hpp"

namespace netgov::rl {

struct TrainEpisodeStat {
    int episode = 0;
    double epsilon = 0.0;
    double episode_return = 0.0;
    double mean_loss = 0.0;
};

/// Mean squared TD error over the batch; accumulates dL/dtheta into the
/// online agent's gradient slots (zeroed first). y is a stop-gradient:
/// nothing flows through the target network.
template <typename Agent, typename MaskFn>
double q_loss_and_grad(Agent& online, const Agent& target,
                       const std::vector<const Transition<typename Agent::Obs>*>& batch,
                       double gamma, MaskFn&& next_mask) {
    const nn::ParamList params = online.params();
    nn::zero_grads(params);
    double loss = 0.0;
    const double scale = 2.0 / static_cast<double>(batch.size());
    for (const auto* tr : batch) {
        typename Agent::Cache cache;
        const nn::Vector q = online.q_values(tr->obs, cache);
        double y = tr->reward;
        if (!tr->done) {
            const nn::Vector qn = target.q_values(tr->next_obs);
            const std::vector<std::uint8_t> mask = next_mask(tr->next_obs);
            y += gamma * max_masked(qn, mask);
        }
        const double diff = q[static_cast<std::size_t>(tr->action)] - y;
        loss += diff * diff;
        nn::Vector dq(q.size(), 0.0);
        dq[static_cast<std::size_t>(tr->action)] = scale * diff;
        online.backward(cache, dq);
    }
    return loss / static_cast<double>(batch.size());
}

/// Shared DQN bookkeeping: replay, warmup/update cadence, target syncs,
/// Adam steps, per-episode loss accounting.
template <typename Agent, typename MaskFn>
class DqnEngine {
   public:
    DqnEngine(Agent& online, const DqnConfig& cfg, std::uint64_t sample_seed, MaskFn next_mask)
        : online_(online),
          target_(online),
          cfg_(cfg),
          params_(online.params()),
          opt_(params_, cfg.lr),
          buffer_(static_cast<std::size_t>(cfg.buffer_capacity)),
          sample_rng_(sample_seed),
          next_mask_(std::move(next_mask)) {}

    void observe(Transition<typename Agent::Obs> tr) {
        buffer_.push(std::move(tr));
        ++env_steps_;
        if (buffer_.size() < static_cast<std::size_t>(cfg_.warmup_transitions)) return;
        if (env_steps_ % cfg_.update_every != 0) return;
        const auto batch =
            buffer_.sample(static_cast<std::size_t>(cfg_.batch_size), sample_rng_);
        const double loss = q_loss_and_grad(online_, target_, batch, cfg_.gamma, next_mask_);
        opt_.step(params_);
        ++grad_steps_;
        loss_sum_ += loss;
        ++loss_batches_;
        if (grad_steps_ % cfg_.target_sync_interval == 0) target_ = online_;
    }

    /// Mean loss since the last call; 0 when no updates ran.
    double drain_mean_loss() {
        const double mean = loss_batches_ > 0 ? loss_sum_ / static_cast<double>(loss_batches_) : 0.0;
        loss_sum_ = 0.0;
        loss_batches_ = 0;
        return mean;
    }

    long long grad_steps() const { return grad_steps_; }

   private:
    Agent& online_;
    Agent target_;
    DqnConfig cfg_;
    nn::ParamList params_;
    nn::Adam opt_;
    ReplayBuffer<typename Agent::Obs> buffer_;
    Rng sample_rng_;
    MaskFn next_mask_;
    long long env_steps_ = 0;
    long long grad_steps_ = 0;
    double loss_sum_ = 0.0;
    long long loss_batches_ = 0;
};

/// Phase 1: random node choice (uniform over nodes with a valid partner),
/// link agent learns partner selection.
std::vector<TrainEpisodeStat> train_phase1_link_agent(const env::EnvConfig& env_cfg,
                                                      manager::LinkAgent& link,
                                                      const DqnConfig& cfg,
                                                      std::ostream* log = nullptr);

/// Phase 2: node agent learns endpoint selection against the frozen, greedy
/// link agent.
std::vector<TrainEpisodeStat> train_phase2_node_agent(const env::EnvConfig& env_cfg,
                                                      const manager::LinkAgent& frozen_link,
                                                      manager::NodeAgent& node,
                                                      const DqnConfig& cfg,
                                                      std::ostream* log = nullptr);

std::vector<TrainEpisodeStat> train_flat_agent(const env::EnvConfig& env_cfg,
                                               manager::FlatAgent& flat, const DqnConfig& cfg,
                                               std::ostream* log = nullptr);

}  // namespace netgov::rl
