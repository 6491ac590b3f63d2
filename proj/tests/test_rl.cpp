#include <array>
#include <cmath>

#include <doctest.h>

#include "netgov/dqn.hpp"
#include "netgov/env.hpp"
#include "netgov/errors.hpp"
#include "netgov/experiment.hpp"
#include "netgov/metrics.hpp"
#include "netgov/policies.hpp"
#include "netgov/replay.hpp"
#include "netgov/training.hpp"

using namespace netgov;
using rl::Transition;

namespace {

// Minimal agent with analytically known Q values: q_i(x) = w_i * x.
struct ToyAgent {
    using Obs = double;
    struct Cache {
        double x = 0.0;
    };

    nn::Vector w{1.0, 0.0};
    nn::Vector gw{0.0, 0.0};

    nn::ParamList params() { return {nn::ParamRef{&w, &gw}}; }
    nn::Vector q_values(double x, Cache& cache) const {
        cache.x = x;
        return {w[0] * x, w[1] * x};
    }
    nn::Vector q_values(double x) const {
        Cache c;
        return q_values(x, c);
    }
    void backward(const Cache& cache, std::span<const double> dq) {
        gw[0] += dq[0] * cache.x;
        gw[1] += dq[1] * cache.x;
    }
};

std::vector<std::uint8_t> all_valid_2(const double&) { return {1, 1}; }

env::EnvConfig tiny_env(int n, double p_imitate = 0.0) {
    env::EnvConfig cfg;
    cfg.n = n;
    cfg.p_imitate = p_imitate;
    cfg.horizon = 10;
    return cfg;
}

rl::DqnConfig tiny_dqn(int episodes, std::uint64_t seed) {
    rl::DqnConfig cfg;
    cfg.train_episodes = episodes;
    cfg.hidden_dim = 8;
    cfg.batch_size = 8;
    cfg.warmup_transitions = 16;
    cfg.buffer_capacity = 500;
    cfg.target_sync_interval = 20;
    cfg.seed = seed;
    return cfg;
}

}  // namespace

TEST_CASE("replay buffer: ring semantics") {
    rl::ReplayBuffer<int> buf(2);
    CHECK(buf.size() == 0);
    buf.push({10, 0, 0.0, 0, false});
    CHECK(buf.size() == 1);
    buf.push({11, 0, 0.0, 0, false});
    buf.push({12, 0, 0.0, 0, false});
    CHECK(buf.size() == 2);
    // Oldest (obs=10) evicted, slot reused.
    CHECK(buf.at(0).obs == 12);
    CHECK(buf.at(1).obs == 11);
    CHECK_THROWS_AS(rl::ReplayBuffer<int>(0), ConfigError);
}

TEST_CASE("replay buffer: sampling is distinct, stored, slot-ordered") {
    rl::ReplayBuffer<int> buf(16);
    for (int i = 0; i < 12; ++i) buf.push({100 + i, 0, 0.0, 0, false});
    Rng rng(7);
    for (int trial = 0; trial < 200; ++trial) {
        const auto batch = buf.sample(5, rng);
        REQUIRE(batch.size() == 5);
        for (std::size_t i = 0; i < batch.size(); ++i) {
            CHECK(batch[i]->obs >= 100);
            CHECK(batch[i]->obs < 112);
            if (i > 0) CHECK(batch[i - 1]->obs < batch[i]->obs);  // distinct + ordered
        }
    }
    CHECK_THROWS_AS(buf.sample(13, rng), ConfigError);
}

TEST_CASE("epsilon schedule: exact endpoints, linear in between") {
    rl::EpsilonSchedule sched{1.0, 0.05, 10};
    CHECK(sched.at(0) == 1.0);
    CHECK(sched.at(10) == 0.05);
    CHECK(sched.at(25) == 0.05);
    CHECK(sched.at(5) == doctest::Approx(0.525).epsilon(1e-12));
    // Equal spacing
    for (int e = 1; e < 10; ++e)
        CHECK(sched.at(e) - sched.at(e - 1) == doctest::Approx(-0.095).epsilon(1e-9));
    rl::EpsilonSchedule degenerate{1.0, 0.05, 0};
    CHECK(degenerate.at(0) == 0.05);
}

TEST_CASE("td_target") {
    CHECK(rl::td_target(-1.0, true, 0.99, 123.0) == -1.0);       // done ignores next
    CHECK(rl::td_target(-1.0, true, 0.99, -9000.0) == -1.0);
    CHECK(rl::td_target(0.7, false, 0.0, 55.0) == 0.7);          // gamma 0
    CHECK(rl::td_target(0.0, false, 0.99, -2.0) == doctest::Approx(-1.98).epsilon(1e-12));
}

TEST_CASE("argmax_masked and epsilon_greedy basics") {
    const std::array<double, 3> q{1.0, 5.0, 3.0};
    const std::array<std::uint8_t, 3> all{1, 1, 1};
    const std::array<std::uint8_t, 3> best_masked{1, 0, 1};
    const std::array<std::uint8_t, 3> none{0, 0, 0};
    CHECK(rl::argmax_masked(q, all) == 1);
    CHECK(rl::argmax_masked(q, best_masked) == 2);
    const std::array<double, 4> ties{2.0, 7.0, 7.0, 7.0};
    const std::array<std::uint8_t, 4> all4{1, 1, 1, 1};
    CHECK(rl::argmax_masked(ties, all4) == 1);  // lowest index wins
    CHECK_THROWS_AS(rl::argmax_masked(q, none), NoValidActionError);

    Rng rng(3);
    CHECK(rl::epsilon_greedy(q, all, 0.0, rng) == 1);
    CHECK(rl::epsilon_greedy(q, best_masked, 0.0, rng) == 2);
    CHECK(rl::max_masked(q, best_masked) == 3.0);
}

TEST_CASE("epsilon_greedy: invalid actions never selected at any epsilon") {
    Rng rng(11);
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t n = 2 + rng.uniform_int(8);
        std::vector<double> q(n);
        std::vector<std::uint8_t> mask(n);
        bool any = false;
        for (std::size_t i = 0; i < n; ++i) {
            q[i] = rng.uniform() * 10.0 - 5.0;
            mask[i] = rng.bernoulli(0.5) ? 1 : 0;
            any = any || mask[i];
        }
        if (!any) mask[rng.uniform_int(static_cast<int>(n))] = 1;
        const double eps = rng.uniform();
        for (int draw = 0; draw < 10; ++draw) {
            const int a = rl::epsilon_greedy(q, mask, eps, rng);
            CHECK(mask[static_cast<std::size_t>(a)] == 1);
        }
    }
}

TEST_CASE("epsilon_greedy: eps=1 is uniform over the valid set (chi-squared)") {
    const std::array<double, 6> q{9.0, 1.0, 4.0, 2.0, 8.0, 0.0};
    const std::array<std::uint8_t, 6> mask{1, 0, 1, 1, 0, 1};  // 4 valid actions
    Rng rng(12345);
    std::array<int, 6> counts{};
    const int draws = 10000;
    for (int i = 0; i < draws; ++i) ++counts[static_cast<std::size_t>(rl::epsilon_greedy(q, mask, 1.0, rng))];
    CHECK(counts[1] == 0);
    CHECK(counts[4] == 0);
    const double expected = draws / 4.0;
    double chi2 = 0.0;
    for (std::size_t i : {0u, 2u, 3u, 5u}) {
        const double d = counts[i] - expected;
        chi2 += d * d / expected;
    }
    CHECK(chi2 < 16.27);  // df=3, alpha=0.001
}

TEST_CASE("q_loss: exact hand examples on a linear toy agent") {
    // Q(o,a) = y for every item -> zero loss, zero gradients.
    ToyAgent agent;  // q(x) = (x, 0)
    ToyAgent target = agent;
    std::vector<Transition<double>> storage{
        {2.0, 0, 2.0, 0.0, true},   // q = 2, y = 2
        {-3.0, 0, -3.0, 0.0, true},
    };
    std::vector<const Transition<double>*> batch{&storage[0], &storage[1]};
    double loss = rl::q_loss_and_grad(agent, target, batch, 0.99, all_valid_2);
    CHECK(loss == 0.0);
    CHECK(agent.gw[0] == 0.0);
    CHECK(agent.gw[1] == 0.0);

    // Single item with Q=1, y=0 -> loss 1; dL/dw0 = 2*(q-y)*x = 2.
    std::vector<Transition<double>> one{{1.0, 0, 0.0, 0.0, true}};
    std::vector<const Transition<double>*> single{&one[0]};
    loss = rl::q_loss_and_grad(agent, target, single, 0.99, all_valid_2);
    CHECK(loss == 1.0);
    CHECK(agent.gw[0] == 2.0);

    // Non-terminal target: y = r + gamma * max over VALID next actions.
    // target q(x=4) = (4, 0); masking action 0 leaves max = 0.
    auto only_second = [](const double&) { return std::vector<std::uint8_t>{0, 1}; };
    std::vector<Transition<double>> boot{{1.0, 0, 0.5, 4.0, false}};
    std::vector<const Transition<double>*> bb{&boot[0]};
    loss = rl::q_loss_and_grad(agent, target, bb, 0.5, only_second);
    CHECK(loss == doctest::Approx((1.0 - 0.5) * (1.0 - 0.5)).epsilon(1e-12));
    loss = rl::q_loss_and_grad(agent, target, bb, 0.5, all_valid_2);
    CHECK(loss == doctest::Approx((1.0 - 2.5) * (1.0 - 2.5)).epsilon(1e-12));
}

TEST_CASE("q_loss gradients match finite differences on a real agent") {
    Rng rng(21);
    env::EnvConfig cfg = tiny_env(4);
    cfg.seed = 9;
    Rng env_rng(cfg.seed);
    const env::EnvState s0 = env::make_initial_state(cfg, env_rng);
    const env::EnvState s1 = env::make_initial_state(cfg, env_rng);
    const env::EnvState s2 = env::make_initial_state(cfg, env_rng);

    manager::FlatAgent online = manager::make_flat_agent(4, 8, rng);
    manager::FlatAgent target = online;
    auto first_valid = [](const env::EnvState& s) {
        const auto mask = manager::flat_valid_mask(s.network);
        return static_cast<int>(std::find(mask.begin(), mask.end(), 1) - mask.begin());
    };
    std::vector<Transition<env::EnvState>> storage{
        {s0, first_valid(s0), -1.25, s1, false},
        {s1, first_valid(s1), -0.5, s2, true},
        {s2, first_valid(s2), -2.0, s0, false},
    };
    std::vector<const Transition<env::EnvState>*> batch;
    for (auto& t : storage) batch.push_back(&t);
    auto mask_fn = [](const env::EnvState& s) { return manager::flat_valid_mask(s.network); };

    rl::q_loss_and_grad(online, target, batch, 0.99, mask_fn);
    // Snapshot analytic grads, then finite-difference every parameter.
    const nn::ParamList params = online.params();
    std::vector<nn::Vector> grads;
    for (const auto& p : params) grads.push_back(*p.grad);

    auto loss_of = [&]() {
        double total = 0.0;
        for (const auto* tr : batch) {
            const nn::Vector q = online.q_values(tr->obs);
            double y = tr->reward;
            if (!tr->done)
                y += 0.99 * rl::max_masked(target.q_values(tr->next_obs), mask_fn(tr->next_obs));
            const double d = q[static_cast<std::size_t>(tr->action)] - y;
            total += d * d;
        }
        return total / static_cast<double>(batch.size());
    };

    const double eps = 1e-5;
    int checked = 0;
    for (std::size_t pi = 0; pi < params.size(); ++pi) {
        for (std::size_t i = 0; i < params[pi].value->size(); i += 7) {  // stride keeps runtime sane
            double& v = (*params[pi].value)[i];
            const double saved = v;
            v = saved + eps;
            const double lp = loss_of();
            v = saved - eps;
            const double lm = loss_of();
            v = saved;
            const double fd = (lp - lm) / (2.0 * eps);
            const double g = grads[pi][i];
            CHECK(std::abs(fd - g) / std::max({std::abs(fd), std::abs(g), 1e-6}) <= 1e-4);
            ++checked;
        }
    }
    CHECK(checked > 50);
}

TEST_CASE("target sync: copy is bitwise equal and idempotent, updates diverge") {
    Rng rng(31);
    manager::LinkAgent online = manager::make_link_agent(8, rng);
    manager::LinkAgent target = online;  // sync
    CHECK(online.to_json() == target.to_json());

    // Simulate online updates.
    nn::ParamList params = online.params();
    (*params[0].value)[0] += 0.25;
    (*params[2].value)[1] -= 1.0;
    CHECK(online.to_json() != target.to_json());

    target = online;  // sync again
    CHECK(online.to_json() == target.to_json());
    target = online;  // idempotent
    CHECK(online.to_json() == target.to_json());

    // Q values agree on a probe after sync.
    env::EnvConfig cfg = tiny_env(5);
    Rng env_rng(4);
    const env::EnvState state = env::make_initial_state(cfg, env_rng);
    CHECK(online.q_values({state, 2}) == target.q_values({state, 2}));
}

TEST_CASE("training: zero episodes leave parameters unchanged") {
    Rng rng(41);
    manager::LinkAgent link = manager::make_link_agent(8, rng);
    manager::NodeAgent node = manager::make_node_agent(8, rng);
    manager::FlatAgent flat = manager::make_flat_agent(4, 8, rng);
    const auto link_before = link.to_json();
    const auto node_before = node.to_json();
    const auto flat_before = flat.to_json();

    const env::EnvConfig env_cfg = tiny_env(4);
    const rl::DqnConfig cfg = tiny_dqn(0, 1);
    CHECK(rl::train_phase1_link_agent(env_cfg, link, cfg).empty());
    CHECK(rl::train_phase2_node_agent(env_cfg, link, node, cfg).empty());
    CHECK(rl::train_flat_agent(env_cfg, flat, cfg).empty());
    CHECK(link.to_json() == link_before);
    CHECK(node.to_json() == node_before);
    CHECK(flat.to_json() == flat_before);
}

TEST_CASE("training: curve length, schedule, and the phase-2 freeze contract") {
    Rng rng(42);
    manager::LinkAgent link = manager::make_link_agent(8, rng);
    const env::EnvConfig env_cfg = tiny_env(4);
    const rl::DqnConfig cfg = tiny_dqn(6, 2);

    const auto curve = rl::train_phase1_link_agent(env_cfg, link, cfg);
    REQUIRE(curve.size() == 6);
    for (int e = 0; e < 6; ++e) CHECK(curve[static_cast<std::size_t>(e)].episode == e);
    CHECK(curve[0].epsilon == 1.0);
    CHECK(curve[5].epsilon == 0.05);
    CHECK(curve[1].epsilon == doctest::Approx(1.0 + (0.05 - 1.0) / 3.0));

    const auto frozen = link.to_json();
    manager::NodeAgent node = manager::make_node_agent(8, rng);
    const auto node_before = node.to_json();
    const auto curve2 = rl::train_phase2_node_agent(env_cfg, link, node, cfg);
    CHECK(curve2.size() == 6);
    CHECK(link.to_json() == frozen);        // frozen link untouched
    CHECK(node.to_json() != node_before);   // node actually trained
}

TEST_CASE("training: fixed seed reproduces curves and parameters exactly") {
    const env::EnvConfig env_cfg = tiny_env(4, 0.3);
    const rl::DqnConfig cfg = tiny_dqn(5, 77);

    auto run = [&](std::uint64_t init_seed) {
        Rng rng(init_seed);
        manager::LinkAgent link = manager::make_link_agent(8, rng);
        auto curve = rl::train_phase1_link_agent(env_cfg, link, cfg);
        return std::make_pair(link.to_json(), curve);
    };
    const auto [params_a, curve_a] = run(900);
    const auto [params_b, curve_b] = run(900);
    CHECK(params_a == params_b);
    REQUIRE(curve_a.size() == curve_b.size());
    for (std::size_t i = 0; i < curve_a.size(); ++i) {
        CHECK(curve_a[i].episode_return == curve_b[i].episode_return);
        CHECK(curve_a[i].mean_loss == curve_b[i].mean_loss);
    }
    const auto [params_c, curve_c] = run(901);  // different init -> different nets
    CHECK(params_a != params_c);
}

TEST_CASE("reward accounting matches the metrics module over a rollout") {
    env::EnvConfig cfg = tiny_env(6, 0.4);
    cfg.horizon = 20;
    Rng env_rng(17);
    Rng act_rng(18);
    env::EnvState state = env::make_initial_state(cfg, env_rng);
    double reward_sum = 0.0;
    std::vector<metrics::MetricsRecord> records;
    while (true) {
        const auto types_before = state.types;
        const env::ManagerAction a = manager::random_act(state, act_rng);
        const env::StepResult step = env::env_step(state, a, cfg, env_rng);
        reward_sum += step.reward;
        records.push_back(metrics::make_record(static_cast<int>(records.size()) + 1,
                                               step.state.network, types_before,
                                               step.state.last_utilities));
        state = step.state;
        if (step.done) break;
    }
    REQUIRE(static_cast<int>(records.size()) == cfg.horizon);
    const metrics::EpisodeSummary summary = metrics::summarize_episode(records);
    CHECK(reward_sum == doctest::Approx(summary.avg_welfare * cfg.horizon).epsilon(1e-9));
}

TEST_CASE("phase 1 learns myopically-optimal partners on a frozen 4-node environment") {
    // gamma = 0 turns Q learning into regression on the immediate reward, so
    // the greedy link choice should match the best single-step intervention
    // found by brute force.
    env::EnvConfig env_cfg = tiny_env(4, 0.0);
    env_cfg.horizon = 25;
    rl::DqnConfig cfg;
    cfg.gamma = 0.0;
    cfg.lr = 3e-3;
    cfg.hidden_dim = 16;
    cfg.batch_size = 32;
    cfg.warmup_transitions = 200;
    cfg.buffer_capacity = 4000;
    cfg.target_sync_interval = 100;
    cfg.train_episodes = 200;
    cfg.seed = 5;

    Rng rng(55);
    manager::LinkAgent link = manager::make_link_agent(cfg.hidden_dim, rng);
    rl::train_phase1_link_agent(env_cfg, link, cfg);

    Rng probe_rng(99);
    int optimal = 0;
    const int probes = 30;
    for (int p = 0; p < probes; ++p) {
        env::EnvConfig pc = env_cfg;
        pc.seed = 1000 + static_cast<std::uint64_t>(p);
        Rng er(pc.seed);
        env::EnvState state = env::make_initial_state(pc, er);
        for (int warm = 0; warm < p % 4; ++warm)
            state = env::env_step(state, manager::random_act(state, probe_rng), pc, er).state;

        const auto node_mask = manager::node_valid_mask(state.network);
        std::vector<int> candidates;
        for (int u = 0; u < 4; ++u)
            if (node_mask[static_cast<std::size_t>(u)]) candidates.push_back(u);
        const int selected = candidates[probe_rng.uniform_int(static_cast<int>(candidates.size()))];

        const auto mask = manager::link_valid_mask(state.network, selected);
        const nn::Vector q = link.q_values({state, selected});
        const int greedy = rl::argmax_masked(q, mask);

        auto reward_of = [&](int partner) {
            Rng step_rng(0);  // p_imitate = 0: reward independent of rng
            return env::env_step(state, {selected, partner}, pc, step_rng).reward;
        };
        double best = -1e18;
        for (int v = 0; v < 4; ++v)
            if (mask[static_cast<std::size_t>(v)]) best = std::max(best, reward_of(v));
        if (reward_of(greedy) >= best - 1e-9) ++optimal;
    }
    CHECK(optimal >= probes * 9 / 10);
}

TEST_CASE("trained HGRL beats the random manager at n=10, p_imitate=0") {
    cli::ExperimentConfig cfg;
    cfg.env = tiny_env(10, 0.0);
    cfg.env.horizon = 30;
    cfg.dqn = tiny_dqn(120, 0);
    cfg.dqn.hidden_dim = 16;
    cfg.dqn.batch_size = 16;
    cfg.dqn.warmup_transitions = 128;
    cfg.dqn.buffer_capacity = 5000;
    cfg.dqn.target_sync_interval = 100;
    cfg.dqn.update_every = 4;
    cfg.seed = 3;

    const cli::HgrlTrainResult trained = cli::train_hgrl(cfg);
    env::EnvConfig eval_env = cfg.env;
    eval_env.horizon = 30;
    const cli::EvalResult hgrl = cli::evaluate_policy(
        eval_env, cli::greedy_hgrl_policy(trained.node, trained.link), 200, 424242);
    const cli::EvalResult rand = cli::evaluate_policy(eval_env, cli::random_policy(), 200, 424242);
    CHECK(hgrl.avg_welfare_mean >= rand.avg_welfare_mean);
}
