#include "netgov/agents.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "netgov/checkpoint.hpp"
#include "netgov/errors.hpp"

namespace netgov::manager {

namespace {

constexpr int kFeatureDim = 4;
constexpr int kCheckpointVersion = 1;

nlohmann::json agent_header(const char* kind, int hidden_dim) {
    nlohmann::json doc;
    doc["format"] = "netgov-agent";
    doc["version"] = kCheckpointVersion;
    doc["kind"] = kind;
    doc["hidden_dim"] = hidden_dim;
    return doc;
}

void check_agent_header(const nlohmann::json& doc, const char* kind, int hidden_dim) {
    if (!doc.is_object() || doc.value("format", "") != "netgov-agent")
        throw ConfigError("checkpoint: not a netgov-agent file");
    if (doc.value("version", 0) != kCheckpointVersion)
        throw ConfigError("checkpoint: unsupported version");
    if (doc.value("kind", "") != kind)
        throw ConfigError(std::string("checkpoint: expected kind '") + kind + "'");
    if (doc.value("hidden_dim", -1) != hidden_dim)
        throw ConfigError("checkpoint: hidden_dim mismatch");
}

}  // namespace

nn::Matrix node_features(const env::EnvState& state) {
    const int n = state.size();
    const double denom = n > 1 ? static_cast<double>(n - 1) : 1.0;
    nn::Matrix f(n, kFeatureDim);
    for (int u = 0; u < n; ++u) {
        auto row = f.row(u);
        row[0] = state.types[static_cast<std::size_t>(u)] == env::AgentType::Cooperator ? 1.0 : 0.0;
        row[1] = 1.0 - row[0];
        row[2] = state.network.degree(u) / denom;
        row[3] = state.last_utilities[static_cast<std::size_t>(u)] / (6.0 * denom);
    }
    return f;
}

nn::AdjList adjacency_list(const env::Network& net) {
    nn::AdjList nbrs(static_cast<std::size_t>(net.size()));
    for (int u = 0; u < net.size(); ++u) nbrs[static_cast<std::size_t>(u)] = net.neighbors(u);
    return nbrs;
}

int pair_index(int u, int v, int n) {
    if (u > v) std::swap(u, v);
    return u * n - u * (u + 1) / 2 + (v - u - 1);
}

env::ManagerAction pair_action(int index, int n) {
    int u = 0;
    int row = n - 1;
    while (index >= row) {
        index -= row;
        --row;
        ++u;
    }
    return {u, u + 1 + index};
}

int pair_count(int n) { return n * (n - 1) / 2; }

std::vector<std::uint8_t> link_valid_mask(const env::Network& net, int selected) {
    const int n = net.size();
    std::vector<std::uint8_t> mask(static_cast<std::size_t>(n), 1);
    mask[static_cast<std::size_t>(selected)] = 0;
    const auto bridges = net.bridges();
    for (int v = 0; v < n; ++v) {
        if (v == selected || !net.has_edge(selected, v)) continue;
        const std::pair<int, int> e{std::min(selected, v), std::max(selected, v)};
        if (std::binary_search(bridges.begin(), bridges.end(), e))
            mask[static_cast<std::size_t>(v)] = 0;
    }
    return mask;
}

std::vector<std::uint8_t> node_valid_mask(const env::Network& net) {
    const int n = net.size();
    std::vector<std::uint8_t> mask(static_cast<std::size_t>(n), 0);
    const auto bridges = net.bridges();
    for (int u = 0; u < n; ++u) {
        if (net.degree(u) < n - 1) {
            mask[static_cast<std::size_t>(u)] = 1;
            continue;
        }
        for (int v : net.neighbors(u)) {
            const std::pair<int, int> e{std::min(u, v), std::max(u, v)};
            if (!std::binary_search(bridges.begin(), bridges.end(), e)) {
                mask[static_cast<std::size_t>(u)] = 1;
                break;
            }
        }
    }
    return mask;
}

std::vector<std::uint8_t> flat_valid_mask(const env::Network& net) {
    const int n = net.size();
    std::vector<std::uint8_t> mask(static_cast<std::size_t>(pair_count(n)), 1);
    const auto bridges = net.bridges();
    for (const auto& [u, v] : bridges) mask[static_cast<std::size_t>(pair_index(u, v, n))] = 0;
    return mask;
}

nn::Vector flat_observation(const env::EnvState& state) {
    const int n = state.size();
    nn::Vector obs;
    obs.reserve(static_cast<std::size_t>(pair_count(n) + kFeatureDim * n));
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v) obs.push_back(state.network.has_edge(u, v) ? 1.0 : 0.0);
    const nn::Vector features = nn::readout_concat(node_features(state));
    obs.insert(obs.end(), features.begin(), features.end());
    return obs;
}

nn::ParamList NodeAgent::params() {
    nn::ParamList out;
    encoder.collect_params(out);
    head.collect_params(out);
    return out;
}

std::size_t NodeAgent::param_count() { return nn::param_count(params()); }

nn::Vector NodeAgent::q_values(const env::EnvState& state, NodeAgentCache& cache) const {
    cache.nbrs = adjacency_list(state.network);
    const nn::Matrix h = encode_graph(encoder, node_features(state), cache.nbrs, cache.enc);
    const int n = state.size();
    cache.head.assign(static_cast<std::size_t>(n), {});
    nn::Vector q(static_cast<std::size_t>(n));
    for (int u = 0; u < n; ++u)
        q[static_cast<std::size_t>(u)] =
            mlp_forward(head, h.row(u), cache.head[static_cast<std::size_t>(u)])[0];
    return q;
}

nn::Vector NodeAgent::q_values(const env::EnvState& state) const {
    NodeAgentCache cache;
    return q_values(state, cache);
}

void NodeAgent::backward(const NodeAgentCache& cache, std::span<const double> dq) {
    const int n = static_cast<int>(dq.size());
    nn::Matrix dh(n, hidden_dim);
    for (int u = 0; u < n; ++u) {
        const double g = dq[static_cast<std::size_t>(u)];
        if (g == 0.0) continue;
        const nn::Vector d1{g};
        const nn::Vector dx = mlp_backward(head, cache.head[static_cast<std::size_t>(u)], d1);
        nn::axpy(1.0, dx, dh.row(u));
    }
    encode_graph_backward(encoder, cache.enc, cache.nbrs, dh);
}

nlohmann::json NodeAgent::to_json() {
    nlohmann::json doc = agent_header("node", hidden_dim);
    doc["tensors"] = nn::tensors_to_json(params());
    return doc;
}

void NodeAgent::from_json(const nlohmann::json& doc) {
    check_agent_header(doc, "node", hidden_dim);
    nn::tensors_from_json(doc.at("tensors"), params());
}

NodeAgent make_node_agent(int hidden_dim, Rng& rng) {
    NodeAgent agent;
    agent.hidden_dim = hidden_dim;
    agent.encoder = nn::make_gnn_encoder(kFeatureDim, hidden_dim, rng);
    agent.head = nn::make_mlp({hidden_dim, hidden_dim, 1}, rng);
    return agent;
}

nn::ParamList LinkAgent::params() {
    nn::ParamList out;
    encoder.collect_params(out);
    head.collect_params(out);
    return out;
}

std::size_t LinkAgent::param_count() { return nn::param_count(params()); }

nn::Vector LinkAgent::q_values(const LinkObs& obs, LinkAgentCache& cache) const {
    const int n = obs.state.size();
    cache.nbrs = adjacency_list(obs.state.network);
    cache.selected = obs.selected;
    const nn::Matrix h = encode_graph(encoder, node_features(obs.state), cache.nbrs, cache.enc);
    cache.head.assign(static_cast<std::size_t>(n), {});
    nn::Vector q(static_cast<std::size_t>(n));
    nn::Vector input(static_cast<std::size_t>(2 * hidden_dim + 1));
    const auto sel = h.row(obs.selected);
    for (int v = 0; v < n; ++v) {
        std::copy(sel.begin(), sel.end(), input.begin());
        const auto cand = h.row(v);
        std::copy(cand.begin(), cand.end(), input.begin() + hidden_dim);
        input.back() = obs.state.network.has_edge(obs.selected, v) ? 1.0 : 0.0;
        q[static_cast<std::size_t>(v)] =
            mlp_forward(head, input, cache.head[static_cast<std::size_t>(v)])[0];
    }
    return q;
}

nn::Vector LinkAgent::q_values(const LinkObs& obs) const {
    LinkAgentCache cache;
    return q_values(obs, cache);
}

void LinkAgent::backward(const LinkAgentCache& cache, std::span<const double> dq) {
    const int n = static_cast<int>(dq.size());
    nn::Matrix dh(n, hidden_dim);
    for (int v = 0; v < n; ++v) {
        const double g = dq[static_cast<std::size_t>(v)];
        if (g == 0.0) continue;
        const nn::Vector d1{g};
        const nn::Vector dx = mlp_backward(head, cache.head[static_cast<std::size_t>(v)], d1);
        nn::axpy(1.0, std::span<const double>(dx).first(static_cast<std::size_t>(hidden_dim)),
                 dh.row(cache.selected));
        nn::axpy(1.0,
                 std::span<const double>(dx).subspan(static_cast<std::size_t>(hidden_dim),
                                                     static_cast<std::size_t>(hidden_dim)),
                 dh.row(v));
    }
    encode_graph_backward(encoder, cache.enc, cache.nbrs, dh);
}

nlohmann::json LinkAgent::to_json() {
    nlohmann::json doc = agent_header("link", hidden_dim);
    doc["tensors"] = nn::tensors_to_json(params());
    return doc;
}

void LinkAgent::from_json(const nlohmann::json& doc) {
    check_agent_header(doc, "link", hidden_dim);
    nn::tensors_from_json(doc.at("tensors"), params());
}

LinkAgent make_link_agent(int hidden_dim, Rng& rng) {
    LinkAgent agent;
    agent.hidden_dim = hidden_dim;
    agent.encoder = nn::make_gnn_encoder(kFeatureDim, hidden_dim, rng);
    agent.head = nn::make_mlp({2 * hidden_dim + 1, hidden_dim, 1}, rng);
    return agent;
}

nn::ParamList FlatAgent::params() {
    nn::ParamList out;
    net.collect_params(out);
    return out;
}

std::size_t FlatAgent::param_count() { return nn::param_count(params()); }

nn::Vector FlatAgent::q_values(const env::EnvState& state, FlatAgentCache& cache) const {
    if (state.size() != n) throw ShapeError("flat agent built for a different n");
    return mlp_forward(net, flat_observation(state), cache.mlp);
}

nn::Vector FlatAgent::q_values(const env::EnvState& state) const {
    FlatAgentCache cache;
    return q_values(state, cache);
}

void FlatAgent::backward(const FlatAgentCache& cache, std::span<const double> dq) {
    mlp_backward(net, cache.mlp, dq);
}

nlohmann::json FlatAgent::to_json() {
    nlohmann::json doc = agent_header("flat", hidden_dim);
    doc["n"] = n;
    doc["tensors"] = nn::tensors_to_json(params());
    return doc;
}

void FlatAgent::from_json(const nlohmann::json& doc) {
    check_agent_header(doc, "flat", hidden_dim);
    if (doc.value("n", -1) != n) throw ConfigError("checkpoint: n mismatch");
    nn::tensors_from_json(doc.at("tensors"), params());
}

int flat_hidden_for_budget(int n, std::size_t target_params) {
    const long long obs = pair_count(n) + kFeatureDim * n;
    const long long pairs = pair_count(n);
    int best_h = 1;
    long long best_err = -1;
    for (int h = 1; h <= 4096; ++h) {
        const long long p = static_cast<long long>(h) * (obs + 1) +
                            static_cast<long long>(h) * (h + 1) +
                            pairs * (h + 1);
        const long long err = std::llabs(p - static_cast<long long>(target_params));
        if (best_err < 0 || err < best_err) {
            best_err = err;
            best_h = h;
        }
    }
    return best_h;
}

FlatAgent make_flat_agent(int n, int gnn_hidden_dim, Rng& rng) {
    Rng probe(0);
    const std::size_t target = make_node_agent(gnn_hidden_dim, probe).param_count() +
                               make_link_agent(gnn_hidden_dim, probe).param_count();
    FlatAgent agent;
    agent.n = n;
    agent.hidden_dim = flat_hidden_for_budget(n, target);
    const int obs = pair_count(n) + kFeatureDim * n;
    agent.net = nn::make_mlp({obs, agent.hidden_dim, agent.hidden_dim, pair_count(n)}, rng);
    return agent;
}

}  // namespace netgov::manager
