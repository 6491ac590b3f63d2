#pragma once

#include <vector>

#include "netgov/env.hpp"

namespace netgov::metrics {

/// Edge counts by endpoint types.
struct EdgeCensus {
    int cc = 0;
    int cd = 0;
    int dd = 0;

    int total() const { return cc + cd + dd; }
    bool operator==(const EdgeCensus&) const = default;
};

EdgeCensus edge_census(const env::Network& net, const std::vector<env::AgentType>& types);

double avg_degree(const env::Network& net);

/// Max over pairs of BFS shortest-path length. Throws DisconnectedError.
int diameter(const env::Network& net);

/// Community label per node; labels need not be contiguous.
using Partition = std::vector<int>;

/// Newman modularity, Q = (1/2m) sum_ij [A_ij - k_i k_j / 2m] delta(c_i, c_j),
/// diagonal included. Defined as 0 when the graph has no edges.
double modularity(const env::Network& net, const Partition& partition);

/// CNM-style greedy agglomeration from singletons: merge the community pair
/// with the largest positive delta-Q (smallest label pair on ties), stop when
/// no merge improves Q. Returned labels are contiguous, ordered by first node.
Partition best_partition(const env::Network& net);

Partition type_partition(const std::vector<env::AgentType>& types);

/// One row of the per-step report. play_types are the types the round was
/// played with (pre-imitation) so welfare and census stay coherent.
struct MetricsRecord {
    int t = 0;
    double welfare_per_agent = 0.0;
    int n_coop = 0;
    double avg_degree = 0.0;
    int diameter = 0;
    double modularity = 0.0;
    int e_cc = 0;
    int e_cd = 0;
    int e_dd = 0;
    double modularity_types = 0.0;

    bool operator==(const MetricsRecord&) const = default;
};

MetricsRecord make_record(int t, const env::Network& net,
                          const std::vector<env::AgentType>& play_types,
                          const std::vector<double>& utilities);

struct EpisodeSummary {
    double avg_welfare = 0.0;
    double final_welfare = 0.0;
    std::vector<MetricsRecord> steps;
};

/// avg = mean welfare_per_agent over the series, final = last entry.
/// Throws ConfigError on an empty series.
EpisodeSummary summarize_episode(std::vector<MetricsRecord> steps);

}  // namespace netgov::metrics
