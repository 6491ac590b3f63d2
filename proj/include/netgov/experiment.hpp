#pragma once

#include <functional>
#include <ostream>
#include <string>

#include <json.hpp>

#include "netgov/metrics.hpp"
#include "netgov/policies.hpp"
#include "netgov/training.hpp"

namespace netgov::cli {

enum class ManagerKind { Hgrl, Flat, Random };

std::string to_string(ManagerKind kind);
ManagerKind manager_from_string(const std::string& name);

struct ExperimentConfig {
    env::EnvConfig env;
    rl::DqnConfig dqn;
    ManagerKind manager = ManagerKind::Hgrl;
    int eval_episodes = 1000;
    int snapshot_every = 0;  // 0 = snapshots off
    std::string out_dir = "out";
    std::uint64_t seed = 0;

    void validate() const;
    nlohmann::json to_json() const;
    static ExperimentConfig from_json(const nlohmann::json& doc);
};

ExperimentConfig load_config(const std::string& path);

/// desk: n=10, 2,000 train episodes, 200 eval episodes, compact nets sized
/// for a single core. paper: 10,000 train, 1,000 eval, full-width nets.
void apply_preset(ExperimentConfig& config, const std::string& name);

/// Shortest round-trip decimal form of x (std::to_chars), for deterministic
/// CSV output.
std::string format_double(double x);

using Policy = std::function<env::ManagerAction(const env::EnvState&, Rng&)>;

Policy greedy_hgrl_policy(const manager::NodeAgent& node, const manager::LinkAgent& link);
Policy greedy_flat_policy(const manager::FlatAgent& flat);
Policy random_policy();

struct Snapshot {
    int t = 0;
    std::vector<std::pair<int, int>> edges;
    std::vector<env::AgentType> types;
    std::vector<double> utilities;
    double welfare = 0.0;
};

/// Per-step metric means across evaluation episodes.
struct StepMeans {
    int t = 0;
    double welfare_per_agent = 0.0;
    double n_coop = 0.0;
    double avg_degree = 0.0;
    double diameter = 0.0;
    double modularity = 0.0;
    double e_cc = 0.0;
    double e_cd = 0.0;
    double e_dd = 0.0;
    double modularity_types = 0.0;
};

struct EvalResult {
    std::vector<metrics::EpisodeSummary> episodes;
    std::vector<StepMeans> mean_steps;
    double avg_welfare_mean = 0.0;
    double avg_welfare_std = 0.0;
    double final_welfare_mean = 0.0;
    double final_welfare_std = 0.0;
};

/// Greedy rollouts over `episodes` fresh environments seeded from `seed`.
/// When snapshots is non-null and snapshot_every > 0, captures state at t=0,
/// every snapshot_every steps, and the final step of each episode.
EvalResult evaluate_policy(const env::EnvConfig& env_cfg, const Policy& policy, int episodes,
                           std::uint64_t seed, int snapshot_every = 0,
                           std::vector<std::vector<Snapshot>>* snapshots = nullptr);

struct HgrlTrainResult {
    manager::NodeAgent node;
    manager::LinkAgent link;
    std::vector<rl::TrainEpisodeStat> phase1;
    std::vector<rl::TrainEpisodeStat> phase2;
};

/// Fresh agents, phase 1 then phase 2; all randomness derived from
/// config.seed.
HgrlTrainResult train_hgrl(const ExperimentConfig& config, std::ostream* log = nullptr);

struct FlatTrainResult {
    manager::FlatAgent agent;
    std::vector<rl::TrainEpisodeStat> curve;
};

FlatTrainResult train_flat(const ExperimentConfig& config, std::ostream* log = nullptr);

void cmd_train(const ExperimentConfig& config, std::ostream& log);
void cmd_eval(const ExperimentConfig& config, std::ostream& log);
void cmd_snapshot_export(const std::string& run_dir, std::ostream& log);
void cmd_compare(const std::vector<std::string>& run_dirs, const std::string& out_dir,
                 std::ostream& log);

}  // namespace netgov::cli
