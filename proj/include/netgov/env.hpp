#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "netgov/errors.hpp"
#include "netgov/rng.hpp"

namespace netgov::env {

enum class AgentType : std::uint8_t { Cooperator, Defector };

/// Row player's utility for each type pairing. Column utility follows from
/// the player swap: payoff(a,b) = (row_utility(a,b), row_utility(b,a)).
struct PayoffMatrix {
    double cc = -0.5;  // cooperator meeting a cooperator
    double cd = -4.0;  // cooperator meeting a defector
    double dc = 0.0;   // defector meeting a cooperator
    double dd = -3.0;  // defector meeting a defector

    double row_utility(AgentType mine, AgentType other) const {
        if (mine == AgentType::Cooperator) {
            return other == AgentType::Cooperator ? cc : cd;
        }
        return other == AgentType::Cooperator ? dc : dd;
    }

    std::pair<double, double> payoff(AgentType a, AgentType b) const {
        return {row_utility(a, b), row_utility(b, a)};
    }

    bool operator==(const PayoffMatrix&) const = default;
};

/// Undirected simple graph on nodes 0..n-1, dense adjacency.
class Network {
public:
    Network() = default;
    explicit Network(int n);

    int size() const { return n_; }
    int edge_count() const { return edge_count_; }
    int degree(int u) const { return degree_[static_cast<std::size_t>(u)]; }

    bool has_edge(int u, int v) const {
        return adj_[static_cast<std::size_t>(u) * n_ + v] != 0;
    }
    void add_edge(int u, int v);
    void remove_edge(int u, int v);

    std::vector<int> neighbors(int u) const;
    /// All edges as (u, v) with u < v, lexicographic order.
    std::vector<std::pair<int, int>> edges() const;

    bool connected() const;
    /// Edges whose removal disconnects the graph (Tarjan lowlink).
    std::vector<std::pair<int, int>> bridges() const;

    bool operator==(const Network&) const = default;

private:
    int n_ = 0;
    int edge_count_ = 0;
    std::vector<std::uint8_t> adj_;
    std::vector<int> degree_;
};

/// Unordered node pair whose link is toggled: add if absent, delete if
/// present. A delete is valid only if the edge is not a bridge.
struct ManagerAction {
    int u = 0;
    int v = 0;
    bool operator==(const ManagerAction&) const = default;
};

struct EnvConfig {
    int n = 10;
    double p_edge = 0.5;
    double p_imitate = 0.0;
    int horizon = 50;
    PayoffMatrix payoff{};
    double cooperator_fraction_init = 0.5;
    std::uint64_t seed = 0;

    void validate() const;  // throws ConfigError
    bool operator==(const EnvConfig&) const = default;
};

struct EnvState {
    Network network;
    std::vector<AgentType> types;
    std::vector<double> last_utilities;
    int t = 0;
    int horizon = 0;

    int size() const { return network.size(); }
    bool operator==(const EnvState&) const = default;
};

struct StepResult {
    EnvState state;
    double reward = 0.0;
    bool done = false;
};

/// Erdos-Renyi graph with each pair linked independently with probability
/// p_edge; whole-graph rejection sampling until connected. Throws ConfigError
/// after 10,000 failed attempts.
Network init_network(int n, double p_edge, Rng& rng);

/// Each node independently Cooperator with probability frac_coop.
std::vector<AgentType> init_types(int n, double frac_coop, Rng& rng);

/// One round of pairwise games: utility_i = sum over neighbors j of the
/// payoff node i receives against j. Pure function of the inputs.
std::vector<double> play_round(const Network& network,
                               const std::vector<AgentType>& types,
                               const PayoffMatrix& payoff);

/// Sum of all agent utilities.
double social_welfare(const std::vector<double>& utilities);

bool is_valid_action(const Network& network, ManagerAction action);

/// All connectivity-preserving toggles: adds for every non-adjacent pair,
/// deletes for every non-bridge edge. Pairs returned with u < v.
std::vector<ManagerAction> valid_actions(const Network& network);

/// Toggles edge (u, v); throws InvalidActionError on a self-loop or on a
/// delete that would disconnect the graph.
Network apply_intervention(const Network& network, ManagerAction action);

/// Synchronous social learning: each agent, with probability p_imitate,
/// looks at one uniformly random neighbor and copies its type if that
/// neighbor's last-step utility is strictly higher. All comparisons read the
/// pre-update snapshot.
std::vector<AgentType> imitation_step(const Network& network,
                                      const std::vector<AgentType>& types,
                                      const std::vector<double>& last_utilities,
                                      double p_imitate, Rng& rng);

/// Fresh episode state: ER network, random types, and last_utilities from
/// one round played on the initial graph (the manager observes the outcome
/// of play before its first intervention).
EnvState make_initial_state(const EnvConfig& config, Rng& rng);

/// One manager step: apply intervention -> play round -> record utilities ->
/// imitation -> t+1. Reward is the post-intervention round's social welfare
/// divided by n; done when t+1 reaches the horizon.
StepResult env_step(const EnvState& state, ManagerAction action,
                    const EnvConfig& config, Rng& rng);

}  // namespace netgov::env
