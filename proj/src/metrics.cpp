#include "netgov/metrics.hpp"

#include <algorithm>
#include <numeric>

#include "netgov/errors.hpp"

namespace netgov::metrics {

EdgeCensus edge_census(const env::Network& net, const std::vector<env::AgentType>& types) {
    EdgeCensus census;
    for (const auto& [u, v] : net.edges()) {
        const bool cu = types[static_cast<std::size_t>(u)] == env::AgentType::Cooperator;
        const bool cv = types[static_cast<std::size_t>(v)] == env::AgentType::Cooperator;
        if (cu && cv)
            ++census.cc;
        else if (cu || cv)
            ++census.cd;
        else
            ++census.dd;
    }
    return census;
}

double avg_degree(const env::Network& net) {
    return 2.0 * net.edge_count() / static_cast<double>(net.size());
}

int diameter(const env::Network& net) {
    const int n = net.size();
    int best = 0;
    std::vector<int> dist(static_cast<std::size_t>(n));
    std::vector<int> queue(static_cast<std::size_t>(n));
    for (int s = 0; s < n; ++s) {
        std::fill(dist.begin(), dist.end(), -1);
        dist[static_cast<std::size_t>(s)] = 0;
        queue[0] = s;
        int head = 0, tail = 1;
        while (head < tail) {
            const int u = queue[head++];
            for (int v : net.neighbors(u)) {
                if (dist[static_cast<std::size_t>(v)] >= 0) continue;
                dist[static_cast<std::size_t>(v)] = dist[static_cast<std::size_t>(u)] + 1;
                queue[tail++] = v;
            }
        }
        if (tail < n) throw DisconnectedError("diameter of a disconnected graph");
        best = std::max(best, *std::max_element(dist.begin(), dist.end()));
    }
    return best;
}

double modularity(const env::Network& net, const Partition& partition) {
    const int n = net.size();
    if (static_cast<int>(partition.size()) != n)
        throw ShapeError("partition size does not match node count");
    const int m = net.edge_count();
    if (m == 0) return 0.0;

    // Group-sum form: Q = sum_c [ L_c/m - (D_c/2m)^2 ].
    std::vector<int> labels(partition);
    std::sort(labels.begin(), labels.end());
    labels.erase(std::unique(labels.begin(), labels.end()), labels.end());
    auto index_of = [&](int label) {
        return static_cast<std::size_t>(
            std::lower_bound(labels.begin(), labels.end(), label) - labels.begin());
    };
    std::vector<long long> intra(labels.size(), 0);
    std::vector<long long> deg(labels.size(), 0);
    for (int u = 0; u < n; ++u)
        deg[index_of(partition[static_cast<std::size_t>(u)])] += net.degree(u);
    for (const auto& [u, v] : net.edges()) {
        const std::size_t cu = index_of(partition[static_cast<std::size_t>(u)]);
        if (cu == index_of(partition[static_cast<std::size_t>(v)])) ++intra[cu];
    }
    double q = 0.0;
    for (std::size_t c = 0; c < labels.size(); ++c) {
        const double frac = static_cast<double>(deg[c]) / (2.0 * m);
        q += static_cast<double>(intra[c]) / m - frac * frac;
    }
    return q;
}

Partition best_partition(const env::Network& net) {
    const int n = net.size();
    Partition labels(static_cast<std::size_t>(n));
    std::iota(labels.begin(), labels.end(), 0);
    const int m = net.edge_count();
    if (m == 0) return labels;

    // e[a][b]: edges between communities a and b; deg[a]: total degree.
    std::vector<std::vector<long long>> e(static_cast<std::size_t>(n),
                                          std::vector<long long>(static_cast<std::size_t>(n), 0));
    std::vector<long long> deg(static_cast<std::size_t>(n), 0);
    std::vector<std::uint8_t> alive(static_cast<std::size_t>(n), 1);
    for (const auto& [u, v] : net.edges()) {
        ++e[static_cast<std::size_t>(u)][static_cast<std::size_t>(v)];
        ++e[static_cast<std::size_t>(v)][static_cast<std::size_t>(u)];
    }
    for (int u = 0; u < n; ++u) deg[static_cast<std::size_t>(u)] = net.degree(u);

    for (;;) {
        double best_dq = 0.0;
        int best_a = -1, best_b = -1;
        for (int a = 0; a < n; ++a) {
            if (!alive[static_cast<std::size_t>(a)]) continue;
            for (int b = a + 1; b < n; ++b) {
                if (!alive[static_cast<std::size_t>(b)]) continue;
                const double dq =
                    static_cast<double>(e[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)]) / m -
                    static_cast<double>(deg[static_cast<std::size_t>(a)]) *
                        static_cast<double>(deg[static_cast<std::size_t>(b)]) / (2.0 * m * m);
                if (dq > best_dq) {
                    best_dq = dq;
                    best_a = a;
                    best_b = b;
                }
            }
        }
        if (best_a < 0) break;
        // Merge b into a (a < b keeps the smallest label).
        for (int c = 0; c < n; ++c) {
            if (!alive[static_cast<std::size_t>(c)] || c == best_a || c == best_b) continue;
            e[static_cast<std::size_t>(best_a)][static_cast<std::size_t>(c)] +=
                e[static_cast<std::size_t>(best_b)][static_cast<std::size_t>(c)];
            e[static_cast<std::size_t>(c)][static_cast<std::size_t>(best_a)] =
                e[static_cast<std::size_t>(best_a)][static_cast<std::size_t>(c)];
        }
        e[static_cast<std::size_t>(best_a)][static_cast<std::size_t>(best_a)] +=
            e[static_cast<std::size_t>(best_a)][static_cast<std::size_t>(best_b)];
        deg[static_cast<std::size_t>(best_a)] += deg[static_cast<std::size_t>(best_b)];
        alive[static_cast<std::size_t>(best_b)] = 0;
        for (int u = 0; u < n; ++u)
            if (labels[static_cast<std::size_t>(u)] == best_b)
                labels[static_cast<std::size_t>(u)] = best_a;
    }

    // Contiguous relabel in order of first appearance.
    std::vector<int> remap(static_cast<std::size_t>(n), -1);
    int next = 0;
    for (int u = 0; u < n; ++u) {
        int& r = remap[static_cast<std::size_t>(labels[static_cast<std::size_t>(u)])];
        if (r < 0) r = next++;
        labels[static_cast<std::size_t>(u)] = r;
    }
    return labels;
}

Partition type_partition(const std::vector<env::AgentType>& types) {
    Partition labels(types.size());
    for (std::size_t u = 0; u < types.size(); ++u)
        labels[u] = types[u] == env::AgentType::Cooperator ? 0 : 1;
    return labels;
}

MetricsRecord make_record(int t, const env::Network& net,
                          const std::vector<env::AgentType>& play_types,
                          const std::vector<double>& utilities) {
    MetricsRecord rec;
    rec.t = t;
    rec.welfare_per_agent = env::social_welfare(utilities) / net.size();
    rec.n_coop = static_cast<int>(
        std::count(play_types.begin(), play_types.end(), env::AgentType::Cooperator));
    rec.avg_degree = avg_degree(net);
    rec.diameter = diameter(net);
    rec.modularity = modularity(net, best_partition(net));
    const EdgeCensus census = edge_census(net, play_types);
    rec.e_cc = census.cc;
    rec.e_cd = census.cd;
    rec.e_dd = census.dd;
    rec.modularity_types = modularity(net, type_partition(play_types));
    return rec;
}

EpisodeSummary summarize_episode(std::vector<MetricsRecord> steps) {
    if (steps.empty()) throw ConfigError("cannot summarize an empty episode");
    EpisodeSummary summary;
    double total = 0.0;
    for (const MetricsRecord& rec : steps) total += rec.welfare_per_agent;
    summary.avg_welfare = total / static_cast<double>(steps.size());
    summary.final_welfare = steps.back().welfare_per_agent;
    summary.steps = std::move(steps);
    return summary;
}

}  // namespace netgov::metrics
