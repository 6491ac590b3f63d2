#include "netgov/training.hpp"

#include "netgov/errors.hpp"
#include "netgov/policies.hpp"

namespace netgov::rl {

namespace {

// Stream ids for Rng::derive; one block per training routine so the three
// procedures draw independent sequences from the same master seed.
enum Stream : std::uint64_t {
    kPhase1Env = 10,
    kPhase1Act = 11,
    kPhase1Sample = 12,
    kPhase2Env = 20,
    kPhase2Act = 21,
    kPhase2Sample = 22,
    kFlatEnv = 30,
    kFlatAct = 31,
    kFlatSample = 32,
};

int random_valid_node(const env::Network& net, Rng& rng) {
    const std::vector<std::uint8_t> mask = manager::node_valid_mask(net);
    std::vector<int> valid;
    for (std::size_t u = 0; u < mask.size(); ++u)
        if (mask[u]) valid.push_back(static_cast<int>(u));
    if (valid.empty()) throw NoValidActionError("no node with a valid partner");
    return valid[rng.uniform_int(valid.size())];
}

void log_progress(std::ostream* log, const char* tag, const TrainEpisodeStat& stat, int total) {
    if (!log) return;
    const int every = total > 10 ? total / 10 : 1;
    if ((stat.episode + 1) % every != 0 && stat.episode + 1 != total) return;
    (*log) << tag << " episode " << (stat.episode + 1) << "/" << total
           << " eps=" << stat.epsilon << " return=" << stat.episode_return
           << " loss=" << stat.mean_loss << "\n";
}

}  // namespace

std::vector<TrainEpisodeStat> train_phase1_link_agent(const env::EnvConfig& env_cfg,
                                                      manager::LinkAgent& link,
                                                      const DqnConfig& cfg, std::ostream* log) {
    env_cfg.validate();
    cfg.validate();
    if (log) (*log) << "phase1 link agent parameters: " << link.param_count() << "\n";
    const EpsilonSchedule eps_sched{cfg.eps_start, cfg.eps_end, cfg.train_episodes / 2};
    auto next_mask = [](const manager::LinkObs& obs) {
        return manager::link_valid_mask(obs.state.network, obs.selected);
    };
    DqnEngine<manager::LinkAgent, decltype(next_mask)> engine(
        link, cfg, Rng::derive(cfg.seed, kPhase1Sample, 0), next_mask);
    Rng act_rng(Rng::derive(cfg.seed, kPhase1Act, 0));

    std::vector<TrainEpisodeStat> curve;
    curve.reserve(static_cast<std::size_t>(cfg.train_episodes));
    for (int episode = 0; episode < cfg.train_episodes; ++episode) {
        const double eps = eps_sched.at(episode);
        Rng env_rng(Rng::derive(cfg.seed, kPhase1Env, static_cast<std::uint64_t>(episode)));
        env::EnvState state = env::make_initial_state(env_cfg, env_rng);
        double episode_return = 0.0;

        bool have_pending = false;
        Transition<manager::LinkObs> pending;
        while (true) {
            const int selected = random_valid_node(state.network, act_rng);
            const manager::LinkObs obs{state, selected};
            if (have_pending) {
                pending.next_obs = obs;
                pending.done = false;
                engine.observe(std::move(pending));
                have_pending = false;
            }
            const nn::Vector q = link.q_values(obs);
            const std::vector<std::uint8_t> mask =
                manager::link_valid_mask(state.network, selected);
            const int partner = epsilon_greedy(q, mask, eps, act_rng);
            const env::StepResult step =
                env::env_step(state, {selected, partner}, env_cfg, env_rng);
            episode_return += step.reward;
            if (step.done) {
                engine.observe({obs, partner, step.reward, {step.state, 0}, true});
            } else {
                pending = {obs, partner, step.reward, {}, false};
                have_pending = true;
            }
            if (step.done) break;
            state = step.state;
        }
        TrainEpisodeStat stat{episode, eps, episode_return, engine.drain_mean_loss()};
        log_progress(log, "phase1", stat, cfg.train_episodes);
        curve.push_back(stat);
    }
    return curve;
}

std::vector<TrainEpisodeStat> train_phase2_node_agent(const env::EnvConfig& env_cfg,
                                                      const manager::LinkAgent& frozen_link,
                                                      manager::NodeAgent& node,
                                                      const DqnConfig& cfg, std::ostream* log) {
    env_cfg.validate();
    cfg.validate();
    if (log) (*log) << "phase2 node agent parameters: " << node.param_count() << "\n";
    const EpsilonSchedule eps_sched{cfg.eps_start, cfg.eps_end, cfg.train_episodes / 2};
    auto next_mask = [](const env::EnvState& obs) {
        return manager::node_valid_mask(obs.network);
    };
    DqnEngine<manager::NodeAgent, decltype(next_mask)> engine(
        node, cfg, Rng::derive(cfg.seed, kPhase2Sample, 0), next_mask);
    Rng act_rng(Rng::derive(cfg.seed, kPhase2Act, 0));

    std::vector<TrainEpisodeStat> curve;
    curve.reserve(static_cast<std::size_t>(cfg.train_episodes));
    for (int episode = 0; episode < cfg.train_episodes; ++episode) {
        const double eps = eps_sched.at(episode);
        Rng env_rng(Rng::derive(cfg.seed, kPhase2Env, static_cast<std::uint64_t>(episode)));
        env::EnvState state = env::make_initial_state(env_cfg, env_rng);
        double episode_return = 0.0;
        while (true) {
            const nn::Vector node_q = node.q_values(state);
            const std::vector<std::uint8_t> node_mask = manager::node_valid_mask(state.network);
            const int selected = epsilon_greedy(node_q, node_mask, eps, act_rng);
            const nn::Vector link_q = frozen_link.q_values({state, selected});
            const std::vector<std::uint8_t> link_mask =
                manager::link_valid_mask(state.network, selected);
            const int partner = argmax_masked(link_q, link_mask);
            const env::StepResult step =
                env::env_step(state, {selected, partner}, env_cfg, env_rng);
            episode_return += step.reward;
            engine.observe({state, selected, step.reward, step.state, step.done});
            if (step.done) break;
            state = step.state;
        }
        TrainEpisodeStat stat{episode, eps, episode_return, engine.drain_mean_loss()};
        log_progress(log, "phase2", stat, cfg.train_episodes);
        curve.push_back(stat);
    }
    return curve;
}

std::vector<TrainEpisodeStat> train_flat_agent(const env::EnvConfig& env_cfg,
                                               manager::FlatAgent& flat, const DqnConfig& cfg,
                                               std::ostream* log) {
    env_cfg.validate();
    cfg.validate();
    if (log) (*log) << "flat agent parameters: " << flat.param_count() << "\n";
    const EpsilonSchedule eps_sched{cfg.eps_start, cfg.eps_end, cfg.train_episodes / 2};
    auto next_mask = [](const env::EnvState& obs) {
        return manager::flat_valid_mask(obs.network);
    };
    DqnEngine<manager::FlatAgent, decltype(next_mask)> engine(
        flat, cfg, Rng::derive(cfg.seed, kFlatSample, 0), next_mask);
    Rng act_rng(Rng::derive(cfg.seed, kFlatAct, 0));

    std::vector<TrainEpisodeStat> curve;
    curve.reserve(static_cast<std::size_t>(cfg.train_episodes));
    for (int episode = 0; episode < cfg.train_episodes; ++episode) {
        const double eps = eps_sched.at(episode);
        Rng env_rng(Rng::derive(cfg.seed, kFlatEnv, static_cast<std::uint64_t>(episode)));
        env::EnvState state = env::make_initial_state(env_cfg, env_rng);
        double episode_return = 0.0;
        while (true) {
            const nn::Vector q = flat.q_values(state);
            const std::vector<std::uint8_t> mask = manager::flat_valid_mask(state.network);
            const int idx = epsilon_greedy(q, mask, eps, act_rng);
            const env::ManagerAction action = manager::pair_action(idx, flat.n);
            const env::StepResult step = env::env_step(state, action, env_cfg, env_rng);
            episode_return += step.reward;
            engine.observe({state, idx, step.reward, step.state, step.done});
            if (step.done) break;
            state = step.state;
        }
        TrainEpisodeStat stat{episode, eps, episode_return, engine.drain_mean_loss()};
        log_progress(log, "flat", stat, cfg.train_episodes);
        curve.push_back(stat);
    }
    return curve;
}

}  // namespace netgov::rl
