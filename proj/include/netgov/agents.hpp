#pragma once

#include <json.hpp>

#include "netgov/env.hpp"
#include "netgov/layers.hpp"

namespace netgov::manager {

/// Per-node observation block: one-hot type (2), degree/(n-1), last utility
/// scaled by 1/(6(n-1)). Everything lands in [-1, 1].
nn::Matrix node_features(const env::EnvState& state);

nn::AdjList adjacency_list(const env::Network& net);

/// Canonical index of the unordered pair (u, v), u < v, in lexicographic
/// order; inverse of pair_action.
int pair_index(int u, int v, int n);
env::ManagerAction pair_action(int index, int n);
int pair_count(int n);

/// mask[v] = 1 iff toggling (selected, v) is a valid intervention.
std::vector<std::uint8_t> link_valid_mask(const env::Network& net, int selected);

/// mask[u] = 1 iff node u has at least one valid partner.
std::vector<std::uint8_t> node_valid_mask(const env::Network& net);

/// mask over unordered pairs, aligned with pair_index.
std::vector<std::uint8_t> flat_valid_mask(const env::Network& net);

/// Upper-triangle adjacency bits followed by flattened node features.
nn::Vector flat_observation(const env::EnvState& state);

/// Picks the first endpoint of an intervention: shared scalar head over
/// per-node GNN embeddings.
struct NodeAgentCache {
    nn::AdjList nbrs;
    nn::GnnEncoderCache enc;
    std::vector<nn::MlpCache> head;
};

struct NodeAgent {
    using Obs = env::EnvState;
    using Cache = NodeAgentCache;

    nn::GnnEncoder encoder;
    nn::Mlp head;
    int hidden_dim = 0;

    nn::ParamList params();
    std::size_t param_count();
    nn::Vector q_values(const env::EnvState& state, NodeAgentCache& cache) const;
    nn::Vector q_values(const env::EnvState& state) const;
    void backward(const NodeAgentCache& cache, std::span<const double> dq);
    nlohmann::json to_json();
    void from_json(const nlohmann::json& doc);
};

NodeAgent make_node_agent(int hidden_dim, Rng& rng);

/// Picks the partner given the selected node: own GNN pass, then a shared
/// head over concat(embedding[selected], embedding[candidate], adjacency bit).
struct LinkObs {
    env::EnvState state;
    int selected = 0;
};

struct LinkAgentCache {
    nn::AdjList nbrs;
    nn::GnnEncoderCache enc;
    std::vector<nn::MlpCache> head;
    int selected = 0;
};

struct LinkAgent {
    using Obs = LinkObs;
    using Cache = LinkAgentCache;

    nn::GnnEncoder encoder;
    nn::Mlp head;
    int hidden_dim = 0;

    nn::ParamList params();
    std::size_t param_count();
    nn::Vector q_values(const LinkObs& obs, LinkAgentCache& cache) const;
    nn::Vector q_values(const LinkObs& obs) const;
    void backward(const LinkAgentCache& cache, std::span<const double> dq);
    nlohmann::json to_json();
    void from_json(const nlohmann::json& doc);
};

LinkAgent make_link_agent(int hidden_dim, Rng& rng);

/// Monolithic baseline: dense net from the flat observation to one Q per
/// unordered pair. Hidden width is solved so the parameter count tracks
/// NodeAgent + LinkAgent at the same hidden_dim.
struct FlatAgentCache {
    nn::MlpCache mlp;
};

struct FlatAgent {
    using Obs = env::EnvState;
    using Cache = FlatAgentCache;

    nn::Mlp net;
    int n = 0;
    int hidden_dim = 0;

    nn::ParamList params();
    std::size_t param_count();
    nn::Vector q_values(const env::EnvState& state, FlatAgentCache& cache) const;
    nn::Vector q_values(const env::EnvState& state) const;
    void backward(const FlatAgentCache& cache, std::span<const double> dq);
    nlohmann::json to_json();
    void from_json(const nlohmann::json& doc);
};

int flat_hidden_for_budget(int n, std::size_t target_params);
FlatAgent make_flat_agent(int n, int gnn_hidden_dim, Rng& rng);

}  // namespace netgov::manager
