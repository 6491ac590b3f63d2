#include "netgov/env.hpp"

#include <algorithm>
#include <cassert>
#include <string>

namespace netgov::env {

Network::Network(int n)
    : n_(n),
      adj_(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), 0),
      degree_(static_cast<std::size_t>(n), 0) {}

void Network::add_edge(int u, int v) {
    assert(u != v && !has_edge(u, v));
    adj_[static_cast<std::size_t>(u) * n_ + v] = 1;
    adj_[static_cast<std::size_t>(v) * n_ + u] = 1;
    ++degree_[static_cast<std::size_t>(u)];
    ++degree_[static_cast<std::size_t>(v)];
    ++edge_count_;
}

void Network::remove_edge(int u, int v) {
    assert(has_edge(u, v));
    adj_[static_cast<std::size_t>(u) * n_ + v] = 0;
    adj_[static_cast<std::size_t>(v) * n_ + u] = 0;
    --degree_[static_cast<std::size_t>(u)];
    --degree_[static_cast<std::size_t>(v)];
    --edge_count_;
}

std::vector<int> Network::neighbors(int u) const {
    std::vector<int> out;
    out.reserve(static_cast<std::size_t>(degree(u)));
    for (int v = 0; v < n_; ++v) {
        if (has_edge(u, v)) out.push_back(v);
    }
    return out;
}

std::vector<std::pair<int, int>> Network::edges() const {
    std::vector<std::pair<int, int>> out;
    out.reserve(static_cast<std::size_t>(edge_count_));
    for (int u = 0; u < n_; ++u) {
        for (int v = u + 1; v < n_; ++v) {
            if (has_edge(u, v)) out.emplace_back(u, v);
        }
    }
    return out;
}

bool Network::connected() const {
    if (n_ <= 1) return true;
    std::vector<std::uint8_t> seen(static_cast<std::size_t>(n_), 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    int count = 1;
    while (!stack.empty()) {
        const int u = stack.back();
        stack.pop_back();
        for (int v = 0; v < n_; ++v) {
            if (has_edge(u, v) && !seen[static_cast<std::size_t>(v)]) {
                seen[static_cast<std::size_t>(v)] = 1;
                ++count;
                stack.push_back(v);
            }
        }
    }
    return count == n_;
}

std::vector<std::pair<int, int>> Network::bridges() const {
    std::vector<std::pair<int, int>> out;
    if (n_ == 0) return out;
    std::vector<int> disc(static_cast<std::size_t>(n_), -1);
    std::vector<int> low(static_cast<std::size_t>(n_), 0);
    int timer = 0;

    // Iterative DFS; (node, parent, next neighbor to scan).
    struct Frame {
        int u;
        int parent;
        int next;
    };
    std::vector<Frame> stack;
    for (int root = 0; root < n_; ++root) {
        if (disc[static_cast<std::size_t>(root)] != -1) continue;
        disc[static_cast<std::size_t>(root)] = low[static_cast<std::size_t>(root)] = timer++;
        stack.push_back({root, -1, 0});
        while (!stack.empty()) {
            Frame& f = stack.back();
            if (f.next < n_) {
                const int v = f.next++;
                if (!has_edge(f.u, v) || v == f.parent) continue;
                if (disc[static_cast<std::size_t>(v)] == -1) {
                    disc[static_cast<std::size_t>(v)] = low[static_cast<std::size_t>(v)] = timer++;
                    stack.push_back({v, f.u, 0});
                } else {
                    low[static_cast<std::size_t>(f.u)] =
                        std::min(low[static_cast<std::size_t>(f.u)], disc[static_cast<std::size_t>(v)]);
                }
            } else {
                const int u = f.u;
                const int p = f.parent;
                stack.pop_back();
                if (p != -1) {
                    low[static_cast<std::size_t>(p)] =
                        std::min(low[static_cast<std::size_t>(p)], low[static_cast<std::size_t>(u)]);
                    if (low[static_cast<std::size_t>(u)] > disc[static_cast<std::size_t>(p)]) {
                        out.emplace_back(std::min(p, u), std::max(p, u));
                    }
                }
            }
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

void EnvConfig::validate() const {
    if (n < 3) throw ConfigError("env.n must be >= 3");
    if (p_edge <= 0.0 || p_edge > 1.0) throw ConfigError("env.p_edge must be in (0, 1]");
    if (p_imitate < 0.0 || p_imitate > 1.0) throw ConfigError("env.p_imitate must be in [0, 1]");
    if (cooperator_fraction_init < 0.0 || cooperator_fraction_init > 1.0) {
        throw ConfigError("env.cooperator_fraction_init must be in [0, 1]");
    }
    if (horizon < 1) throw ConfigError("env.horizon must be >= 1");
}

Network init_network(int n, double p_edge, Rng& rng) {
    if (n < 3) throw ConfigError("init_network: n must be >= 3");
    if (p_edge <= 0.0 || p_edge > 1.0) throw ConfigError("init_network: p_edge must be in (0, 1]");
    constexpr int kMaxAttempts = 10000;
    for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
        Network g(n);
        for (int u = 0; u < n; ++u) {
            for (int v = u + 1; v < n; ++v) {
                if (rng.bernoulli(p_edge)) g.add_edge(u, v);
            }
        }
        if (g.connected()) return g;
    }
    throw ConfigError("init_network: no connected graph after 10000 attempts; "
                      "configuration invalid (n=" + std::to_string(n) +
                      ", p_edge=" + std::to_string(p_edge) + ")");
}

std::vector<AgentType> init_types(int n, double frac_coop, Rng& rng) {
    std::vector<AgentType> types(static_cast<std::size_t>(n));
    for (auto& t : types) {
        t = rng.bernoulli(frac_coop) ? AgentType::Cooperator : AgentType::Defector;
    }
    return types;
}

std::vector<double> play_round(const Network& network,
                               const std::vector<AgentType>& types,
                               const PayoffMatrix& payoff) {
    const int n = network.size();
    std::vector<double> utilities(static_cast<std::size_t>(n), 0.0);
    for (int u = 0; u < n; ++u) {
        double total = 0.0;
        for (int v = 0; v < n; ++v) {
            if (network.has_edge(u, v)) {
                total += payoff.row_utility(types[static_cast<std::size_t>(u)],
                                            types[static_cast<std::size_t>(v)]);
            }
        }
        utilities[static_cast<std::size_t>(u)] = total;
    }
    return utilities;
}

double social_welfare(const std::vector<double>& utilities) {
    double sum = 0.0;
    for (double u : utilities) sum += u;
    return sum;
}

bool is_valid_action(const Network& network, ManagerAction action) {
    const int n = network.size();
    if (action.u == action.v) return false;
    if (action.u < 0 || action.v < 0 || action.u >= n || action.v >= n) return false;
    if (!network.has_edge(action.u, action.v)) return true;  // adds keep connectivity
    Network g = network;
    g.remove_edge(action.u, action.v);
    return g.connected();
}

std::vector<ManagerAction> valid_actions(const Network& network) {
    const int n = network.size();
    const auto bridge_list = network.bridges();
    auto is_bridge = [&](int u, int v) {
        return std::binary_search(bridge_list.begin(), bridge_list.end(),
                                  std::make_pair(std::min(u, v), std::max(u, v)));
    };
    std::vector<ManagerAction> out;
    for (int u = 0; u < n; ++u) {
        for (int v = u + 1; v < n; ++v) {
            if (!network.has_edge(u, v)) {
                out.push_back({u, v});
            } else if (!is_bridge(u, v)) {
                out.push_back({u, v});
            }
        }
    }
    return out;
}

Network apply_intervention(const Network& network, ManagerAction action) {
    if (action.u == action.v) {
        throw InvalidActionError("apply_intervention: self-loop (" +
                                 std::to_string(action.u) + ")");
    }
    Network g = network;
    if (g.has_edge(action.u, action.v)) {
        g.remove_edge(action.u, action.v);
        if (!g.connected()) {
            throw InvalidActionError("apply_intervention: deleting bridge (" +
                                     std::to_string(action.u) + "," +
                                     std::to_string(action.v) + ") disconnects the network");
        }
    } else {
        g.add_edge(action.u, action.v);
    }
    return g;
}

std::vector<AgentType> imitation_step(const Network& network,
                                      const std::vector<AgentType>& types,
                                      const std::vector<double>& last_utilities,
                                      double p_imitate, Rng& rng) {
    const int n = network.size();
    std::vector<AgentType> next = types;
    for (int u = 0; u < n; ++u) {
        if (!rng.bernoulli(p_imitate)) continue;
        const int deg = network.degree(u);
        if (deg == 0) continue;
        int pick = rng.uniform_int(deg);
        int chosen = -1;
        for (int v = 0; v < n; ++v) {
            if (network.has_edge(u, v) && pick-- == 0) {
                chosen = v;
                break;
            }
        }
        if (last_utilities[static_cast<std::size_t>(chosen)] >
            last_utilities[static_cast<std::size_t>(u)]) {
            next[static_cast<std::size_t>(u)] = types[static_cast<std::size_t>(chosen)];
        }
    }
    return next;
}

EnvState make_initial_state(const EnvConfig& config, Rng& rng) {
    config.validate();
    EnvState state;
    state.network = init_network(config.n, config.p_edge, rng);
    state.types = init_types(config.n, config.cooperator_fraction_init, rng);
    state.last_utilities = play_round(state.network, state.types, config.payoff);
    state.t = 0;
    state.horizon = config.horizon;
    return state;
}

StepResult env_step(const EnvState& state, ManagerAction action,
                    const EnvConfig& config, Rng& rng) {
    assert(state.t < state.horizon);
    StepResult result;
    result.state.network = apply_intervention(state.network, action);
    const auto utilities = play_round(result.state.network, state.types, config.payoff);
    result.reward = social_welfare(utilities) / state.network.size();
    result.state.types = imitation_step(result.state.network, state.types, utilities,
                                        config.p_imitate, rng);
    result.state.last_utilities = utilities;
    result.state.t = state.t + 1;
    result.state.horizon = state.horizon;
    result.done = result.state.t == state.horizon;
    return result;
}

}  // namespace netgov::env
