#include "netgov/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>

#include "netgov/checkpoint.hpp"
#include "netgov/errors.hpp"

namespace netgov::cli {

namespace {

namespace fs = std::filesystem;

// Stream ids under the experiment master seed (training streams live in
// training.cpp under the derived dqn seed).
enum Stream : std::uint64_t {
    kEvalEnv = 40,
    kEvalAct = 41,
    kNodeInit = 50,
    kLinkInit = 51,
    kFlatInit = 52,
    kTrainSeed = 60,
};

void check_known_keys(const nlohmann::json& doc, std::initializer_list<const char*> known,
                      const char* scope) {
    for (const auto& [key, value] : doc.items()) {
        if (std::find_if(known.begin(), known.end(),
                         [&](const char* k) { return key == k; }) == known.end())
            throw ConfigError(std::string("unknown config key '") + key + "' in " + scope);
    }
}

nlohmann::json payoff_to_json(const env::PayoffMatrix& p) {
    return {{"cc", p.cc}, {"cd", p.cd}, {"dc", p.dc}, {"dd", p.dd}};
}

env::PayoffMatrix payoff_from_json(const nlohmann::json& doc) {
    check_known_keys(doc, {"cc", "cd", "dc", "dd"}, "payoff");
    env::PayoffMatrix p;
    p.cc = doc.value("cc", p.cc);
    p.cd = doc.value("cd", p.cd);
    p.dc = doc.value("dc", p.dc);
    p.dd = doc.value("dd", p.dd);
    return p;
}

nlohmann::json env_to_json(const env::EnvConfig& c) {
    return {{"n", c.n},
            {"p_edge", c.p_edge},
            {"p_imitate", c.p_imitate},
            {"horizon", c.horizon},
            {"payoff", payoff_to_json(c.payoff)},
            {"cooperator_fraction_init", c.cooperator_fraction_init},
            {"seed", c.seed}};
}

env::EnvConfig env_from_json(const nlohmann::json& doc) {
    check_known_keys(
        doc, {"n", "p_edge", "p_imitate", "horizon", "payoff", "cooperator_fraction_init", "seed"},
        "env");
    env::EnvConfig c;
    c.n = doc.value("n", c.n);
    c.p_edge = doc.value("p_edge", c.p_edge);
    c.p_imitate = doc.value("p_imitate", c.p_imitate);
    c.horizon = doc.value("horizon", c.horizon);
    if (doc.contains("payoff")) c.payoff = payoff_from_json(doc.at("payoff"));
    c.cooperator_fraction_init = doc.value("cooperator_fraction_init", c.cooperator_fraction_init);
    c.seed = doc.value("seed", c.seed);
    return c;
}

nlohmann::json dqn_to_json(const rl::DqnConfig& c) {
    return {{"gamma", c.gamma},
            {"lr", c.lr},
            {"batch_size", c.batch_size},
            {"buffer_capacity", c.buffer_capacity},
            {"target_sync_interval", c.target_sync_interval},
            {"train_episodes", c.train_episodes},
            {"warmup_transitions", c.warmup_transitions},
            {"update_every", c.update_every},
            {"hidden_dim", c.hidden_dim},
            {"eps_start", c.eps_start},
            {"eps_end", c.eps_end},
            {"seed", c.seed}};
}

rl::DqnConfig dqn_from_json(const nlohmann::json& doc) {
    check_known_keys(doc,
                     {"gamma", "lr", "batch_size", "buffer_capacity", "target_sync_interval",
                      "train_episodes", "warmup_transitions", "update_every", "hidden_dim",
                      "eps_start", "eps_end", "seed"},
                     "dqn");
    rl::DqnConfig c;
    c.gamma = doc.value("gamma", c.gamma);
    c.lr = doc.value("lr", c.lr);
    c.batch_size = doc.value("batch_size", c.batch_size);
    c.buffer_capacity = doc.value("buffer_capacity", c.buffer_capacity);
    c.target_sync_interval = doc.value("target_sync_interval", c.target_sync_interval);
    c.train_episodes = doc.value("train_episodes", c.train_episodes);
    c.warmup_transitions = doc.value("warmup_transitions", c.warmup_transitions);
    c.update_every = doc.value("update_every", c.update_every);
    c.hidden_dim = doc.value("hidden_dim", c.hidden_dim);
    c.eps_start = doc.value("eps_start", c.eps_start);
    c.eps_end = doc.value("eps_end", c.eps_end);
    c.seed = doc.value("seed", c.seed);
    return c;
}

void write_text_file(const std::string& path, const std::string& body) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open for writing: " + path);
    out << body;
    if (!out) throw IoError("write failed: " + path);
}

std::string curve_csv(const std::vector<rl::TrainEpisodeStat>& curve) {
    std::string body = "episode,epsilon,episode_return,mean_loss\n";
    for (const rl::TrainEpisodeStat& s : curve) {
        body += std::to_string(s.episode);
        body += ',';
        body += format_double(s.epsilon);
        body += ',';
        body += format_double(s.episode_return);
        body += ',';
        body += format_double(s.mean_loss);
        body += '\n';
    }
    return body;
}

double sample_std(const std::vector<double>& xs, double mean) {
    if (xs.size() < 2) return 0.0;
    double acc = 0.0;
    for (double x : xs) acc += (x - mean) * (x - mean);
    return std::sqrt(acc / static_cast<double>(xs.size() - 1));
}

nlohmann::json snapshot_to_json(const Snapshot& snap) {
    nlohmann::json edges = nlohmann::json::array();
    for (const auto& [u, v] : snap.edges) edges.push_back({u, v});
    nlohmann::json types = nlohmann::json::array();
    for (env::AgentType t : snap.types)
        types.push_back(t == env::AgentType::Cooperator ? "C" : "D");
    return {{"t", snap.t},
            {"edges", edges},
            {"types", types},
            {"utilities", snap.utilities},
            {"welfare", snap.welfare}};
}

nlohmann::json snapshot_schema() {
    return {{"snapshot", {"t", "edges", "types", "utilities", "welfare"}},
            {"edges", "undirected pairs [u, v] with u < v"},
            {"types", "C = cooperator, D = defector"},
            {"utilities", "per-agent payoff sum of the round played at t"},
            {"welfare", "sum of utilities"}};
}

Snapshot capture_snapshot(const env::EnvState& state) {
    Snapshot snap;
    snap.t = state.t;
    snap.edges = state.network.edges();
    snap.types = state.types;
    snap.utilities = state.last_utilities;
    snap.welfare = env::social_welfare(state.last_utilities);
    return snap;
}

}  // namespace

std::string to_string(ManagerKind kind) {
    switch (kind) {
        case ManagerKind::Hgrl: return "hgrl";
        case ManagerKind::Flat: return "flat";
        case ManagerKind::Random: return "random";
    }
    throw ConfigError("unknown manager kind");
}

ManagerKind manager_from_string(const std::string& name) {
    if (name == "hgrl") return ManagerKind::Hgrl;
    if (name == "flat") return ManagerKind::Flat;
    if (name == "random") return ManagerKind::Random;
    throw ConfigError("unknown manager '" + name + "' (expected hgrl, flat, or random)");
}

void ExperimentConfig::validate() const {
    env.validate();
    dqn.validate();
    if (eval_episodes < 1) throw ConfigError("eval_episodes must be >= 1");
    if (snapshot_every < 0) throw ConfigError("snapshot_every must be >= 0");
    if (out_dir.empty()) throw ConfigError("out_dir must not be empty");
}

nlohmann::json ExperimentConfig::to_json() const {
    return {{"env", env_to_json(env)},
            {"dqn", dqn_to_json(dqn)},
            {"manager", cli::to_string(manager)},
            {"eval_episodes", eval_episodes},
            {"snapshot_every", snapshot_every},
            {"out_dir", out_dir},
            {"seed", seed}};
}

ExperimentConfig ExperimentConfig::from_json(const nlohmann::json& doc) {
    if (!doc.is_object()) throw ConfigError("config must be a JSON object");
    check_known_keys(
        doc, {"env", "dqn", "manager", "eval_episodes", "snapshot_every", "out_dir", "seed"},
        "config");
    ExperimentConfig c;
    if (doc.contains("env")) c.env = env_from_json(doc.at("env"));
    if (doc.contains("dqn")) c.dqn = dqn_from_json(doc.at("dqn"));
    if (doc.contains("manager")) c.manager = manager_from_string(doc.at("manager").get<std::string>());
    c.eval_episodes = doc.value("eval_episodes", c.eval_episodes);
    c.snapshot_every = doc.value("snapshot_every", c.snapshot_every);
    c.out_dir = doc.value("out_dir", c.out_dir);
    c.seed = doc.value("seed", c.seed);
    return c;
}

ExperimentConfig load_config(const std::string& path) {
    return ExperimentConfig::from_json(nn::read_json_file(path));
}

void apply_preset(ExperimentConfig& config, const std::string& name) {
    if (name == "desk") {
        config.env.n = 10;
        config.env.horizon = 50;
        config.dqn.train_episodes = 2000;
        config.dqn.hidden_dim = 32;
        config.dqn.batch_size = 32;
        config.dqn.update_every = 4;
        config.eval_episodes = 200;
    } else if (name == "paper") {
        config.env.horizon = config.env.n >= 20 ? 100 : 50;
        config.dqn.train_episodes = 10000;
        config.dqn.hidden_dim = 64;
        config.dqn.batch_size = 64;
        config.dqn.update_every = 1;
        config.eval_episodes = 1000;
    } else {
        throw ConfigError("unknown preset '" + name + "' (expected desk or paper)");
    }
}

std::string format_double(double x) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

Policy greedy_hgrl_policy(const manager::NodeAgent& node, const manager::LinkAgent& link) {
    return [&node, &link](const env::EnvState& state, Rng&) {
        const nn::Vector node_q = node.q_values(state);
        const std::vector<std::uint8_t> node_mask = manager::node_valid_mask(state.network);
        const int selected = rl::argmax_masked(node_q, node_mask);
        const nn::Vector link_q = link.q_values({state, selected});
        const std::vector<std::uint8_t> link_mask =
            manager::link_valid_mask(state.network, selected);
        return env::ManagerAction{selected, rl::argmax_masked(link_q, link_mask)};
    };
}

Policy greedy_flat_policy(const manager::FlatAgent& flat) {
    return [&flat](const env::EnvState& state, Rng&) {
        const nn::Vector q = flat.q_values(state);
        const std::vector<std::uint8_t> mask = manager::flat_valid_mask(state.network);
        return manager::pair_action(rl::argmax_masked(q, mask), flat.n);
    };
}

Policy random_policy() {
    return [](const env::EnvState& state, Rng& rng) { return manager::random_act(state, rng); };
}

EvalResult evaluate_policy(const env::EnvConfig& env_cfg, const Policy& policy, int episodes,
                           std::uint64_t seed, int snapshot_every,
                           std::vector<std::vector<Snapshot>>* snapshots) {
    env_cfg.validate();
    if (episodes < 1) throw ConfigError("eval requires at least one episode");
    EvalResult result;
    result.episodes.reserve(static_cast<std::size_t>(episodes));
    const int horizon = env_cfg.horizon;
    std::vector<StepMeans> sums(static_cast<std::size_t>(horizon));

    for (int e = 0; e < episodes; ++e) {
        Rng env_rng(Rng::derive(seed, kEvalEnv, static_cast<std::uint64_t>(e)));
        Rng act_rng(Rng::derive(seed, kEvalAct, static_cast<std::uint64_t>(e)));
        env::EnvState state = env::make_initial_state(env_cfg, env_rng);
        std::vector<Snapshot>* episode_snaps = nullptr;
        if (snapshots && snapshot_every > 0) {
            snapshots->emplace_back();
            episode_snaps = &snapshots->back();
            episode_snaps->push_back(capture_snapshot(state));
        }
        std::vector<metrics::MetricsRecord> records;
        records.reserve(static_cast<std::size_t>(horizon));
        for (int t = 0; t < horizon; ++t) {
            const env::ManagerAction action = policy(state, act_rng);
            const std::vector<env::AgentType> play_types = state.types;
            const env::StepResult step = env::env_step(state, action, env_cfg, env_rng);
            records.push_back(
                metrics::make_record(t, step.state.network, play_types, step.state.last_utilities));
            state = step.state;
            if (episode_snaps && (state.t % snapshot_every == 0 || state.t == horizon))
                episode_snaps->push_back(capture_snapshot(state));
        }
        for (int t = 0; t < horizon; ++t) {
            const metrics::MetricsRecord& r = records[static_cast<std::size_t>(t)];
            StepMeans& s = sums[static_cast<std::size_t>(t)];
            s.welfare_per_agent += r.welfare_per_agent;
            s.n_coop += r.n_coop;
            s.avg_degree += r.avg_degree;
            s.diameter += r.diameter;
            s.modularity += r.modularity;
            s.e_cc += r.e_cc;
            s.e_cd += r.e_cd;
            s.e_dd += r.e_dd;
            s.modularity_types += r.modularity_types;
        }
        result.episodes.push_back(metrics::summarize_episode(std::move(records)));
    }

    result.mean_steps.resize(static_cast<std::size_t>(horizon));
    const double inv = 1.0 / static_cast<double>(episodes);
    for (int t = 0; t < horizon; ++t) {
        StepMeans& s = result.mean_steps[static_cast<std::size_t>(t)];
        const StepMeans& acc = sums[static_cast<std::size_t>(t)];
        s.t = t;
        s.welfare_per_agent = acc.welfare_per_agent * inv;
        s.n_coop = acc.n_coop * inv;
        s.avg_degree = acc.avg_degree * inv;
        s.diameter = acc.diameter * inv;
        s.modularity = acc.modularity * inv;
        s.e_cc = acc.e_cc * inv;
        s.e_cd = acc.e_cd * inv;
        s.e_dd = acc.e_dd * inv;
        s.modularity_types = acc.modularity_types * inv;
    }

    std::vector<double> avgs, finals;
    avgs.reserve(result.episodes.size());
    finals.reserve(result.episodes.size());
    for (const metrics::EpisodeSummary& ep : result.episodes) {
        avgs.push_back(ep.avg_welfare);
        finals.push_back(ep.final_welfare);
    }
    double avg_sum = 0.0, final_sum = 0.0;
    for (std::size_t i = 0; i < avgs.size(); ++i) {
        avg_sum += avgs[i];
        final_sum += finals[i];
    }
    result.avg_welfare_mean = avg_sum / static_cast<double>(avgs.size());
    result.final_welfare_mean = final_sum / static_cast<double>(finals.size());
    result.avg_welfare_std = sample_std(avgs, result.avg_welfare_mean);
    result.final_welfare_std = sample_std(finals, result.final_welfare_mean);
    return result;
}

HgrlTrainResult train_hgrl(const ExperimentConfig& config, std::ostream* log) {
    config.validate();
    Rng node_init(Rng::derive(config.seed, kNodeInit, 0));
    Rng link_init(Rng::derive(config.seed, kLinkInit, 0));
    HgrlTrainResult result{manager::make_node_agent(config.dqn.hidden_dim, node_init),
                           manager::make_link_agent(config.dqn.hidden_dim, link_init),
                           {},
                           {}};
    rl::DqnConfig dqn = config.dqn;
    dqn.seed = Rng::derive(config.seed, kTrainSeed, 0);
    result.phase1 = rl::train_phase1_link_agent(config.env, result.link, dqn, log);
    result.phase2 = rl::train_phase2_node_agent(config.env, result.link, result.node, dqn, log);
    return result;
}

FlatTrainResult train_flat(const ExperimentConfig& config, std::ostream* log) {
    config.validate();
    Rng flat_init(Rng::derive(config.seed, kFlatInit, 0));
    FlatTrainResult result{manager::make_flat_agent(config.env.n, config.dqn.hidden_dim, flat_init),
                           {}};
    if (log) {
        Rng probe(0);
        const std::size_t hgrl = manager::make_node_agent(config.dqn.hidden_dim, probe).param_count() +
                                 manager::make_link_agent(config.dqn.hidden_dim, probe).param_count();
        const std::size_t flat = result.agent.param_count();
        (*log) << "parameter budget: flat " << flat << " vs hgrl " << hgrl << " (ratio "
               << format_double(static_cast<double>(flat) / static_cast<double>(hgrl)) << ")\n";
    }
    rl::DqnConfig dqn = config.dqn;
    dqn.seed = Rng::derive(config.seed, kTrainSeed, 0);
    result.curve = rl::train_flat_agent(config.env, result.agent, dqn, log);
    return result;
}

void cmd_train(const ExperimentConfig& config, std::ostream& log) {
    config.validate();
    if (config.manager == ManagerKind::Random)
        throw ConfigError("random manager requires no training");
    fs::create_directories(config.out_dir);
    nn::write_json_file(config.out_dir + "/config.json", config.to_json());
    if (config.manager == ManagerKind::Hgrl) {
        HgrlTrainResult result = train_hgrl(config, &log);
        write_text_file(config.out_dir + "/train_phase1.csv", curve_csv(result.phase1));
        write_text_file(config.out_dir + "/train_phase2.csv", curve_csv(result.phase2));
        nn::write_json_file(config.out_dir + "/checkpoint_link.json", result.link.to_json());
        nn::write_json_file(config.out_dir + "/checkpoint_node.json", result.node.to_json());
    } else {
        FlatTrainResult result = train_flat(config, &log);
        write_text_file(config.out_dir + "/train_flat.csv", curve_csv(result.curve));
        nn::write_json_file(config.out_dir + "/checkpoint_flat.json", result.agent.to_json());
    }
    log << "train complete: " << config.out_dir << "\n";
}

void cmd_eval(const ExperimentConfig& config, std::ostream& log) {
    config.validate();
    fs::create_directories(config.out_dir);
    Rng shape_rng(0);  // weights are overwritten by the checkpoint load
    std::optional<manager::NodeAgent> node;
    std::optional<manager::LinkAgent> link;
    std::optional<manager::FlatAgent> flat;
    Policy policy;
    if (config.manager == ManagerKind::Hgrl) {
        node.emplace(manager::make_node_agent(config.dqn.hidden_dim, shape_rng));
        link.emplace(manager::make_link_agent(config.dqn.hidden_dim, shape_rng));
        node->from_json(nn::read_json_file(config.out_dir + "/checkpoint_node.json"));
        link->from_json(nn::read_json_file(config.out_dir + "/checkpoint_link.json"));
        policy = greedy_hgrl_policy(*node, *link);
    } else if (config.manager == ManagerKind::Flat) {
        flat.emplace(manager::make_flat_agent(config.env.n, config.dqn.hidden_dim, shape_rng));
        flat->from_json(nn::read_json_file(config.out_dir + "/checkpoint_flat.json"));
        policy = greedy_flat_policy(*flat);
    } else {
        policy = random_policy();
    }

    std::vector<std::vector<Snapshot>> snapshots;
    const EvalResult result =
        evaluate_policy(config.env, policy, config.eval_episodes, config.seed,
                        config.snapshot_every, &snapshots);

    std::string episodes_csv = "episode,avg_welfare,final_welfare\n";
    for (std::size_t e = 0; e < result.episodes.size(); ++e) {
        episodes_csv += std::to_string(e);
        episodes_csv += ',';
        episodes_csv += format_double(result.episodes[e].avg_welfare);
        episodes_csv += ',';
        episodes_csv += format_double(result.episodes[e].final_welfare);
        episodes_csv += '\n';
    }
    write_text_file(config.out_dir + "/eval_episodes.csv", episodes_csv);

    std::string metrics_csv =
        "t,welfare_per_agent,n_coop,avg_degree,diameter,modularity,E_CC,E_CD,E_DD,"
        "modularity_types\n";
    for (const StepMeans& s : result.mean_steps) {
        metrics_csv += std::to_string(s.t);
        for (double value : {s.welfare_per_agent, s.n_coop, s.avg_degree, s.diameter, s.modularity,
                             s.e_cc, s.e_cd, s.e_dd, s.modularity_types}) {
            metrics_csv += ',';
            metrics_csv += format_double(value);
        }
        metrics_csv += '\n';
    }
    write_text_file(config.out_dir + "/eval_metrics.csv", metrics_csv);

    nlohmann::json summary;
    summary["config"] = config.to_json();
    summary["eval"] = {{"n_episodes", config.eval_episodes},
                       {"avg_welfare_mean", result.avg_welfare_mean},
                       {"avg_welfare_std", result.avg_welfare_std},
                       {"final_welfare_mean", result.final_welfare_mean},
                       {"final_welfare_std", result.final_welfare_std}};
    nn::write_json_file(config.out_dir + "/eval_summary.json", summary);

    nlohmann::json snaps;
    snaps["schema"] = snapshot_schema();
    snaps["snapshot_every"] = config.snapshot_every;
    snaps["episodes"] = nlohmann::json::array();
    for (std::size_t e = 0; e < snapshots.size(); ++e) {
        nlohmann::json entry;
        entry["episode"] = e;
        entry["snapshots"] = nlohmann::json::array();
        for (const Snapshot& snap : snapshots[e]) entry["snapshots"].push_back(snapshot_to_json(snap));
        snaps["episodes"].push_back(entry);
    }
    nn::write_json_file(config.out_dir + "/snapshots.json", snaps);

    log << "eval " << to_string(config.manager) << " p=" << format_double(config.env.p_imitate)
        << ": avg_welfare " << format_double(result.avg_welfare_mean) << " +/- "
        << format_double(result.avg_welfare_std) << ", final_welfare "
        << format_double(result.final_welfare_mean) << " +/- "
        << format_double(result.final_welfare_std) << "\n";
}

void cmd_snapshot_export(const std::string& run_dir, std::ostream& log) {
    const nlohmann::json snaps = nn::read_json_file(run_dir + "/snapshots.json");
    if (!snaps.is_object() || !snaps.contains("episodes"))
        throw IoError("snapshots.json has no episodes array");
    for (const nlohmann::json& entry : snaps.at("episodes")) {
        for (const nlohmann::json& snap : entry.at("snapshots")) {
            const auto types = snap.at("types").get<std::vector<std::string>>();
            const auto utilities = snap.at("utilities").get<std::vector<double>>();
            if (types.size() != utilities.size())
                throw ShapeError("snapshot types/utilities length mismatch");
            env::Network net(static_cast<int>(types.size()));
            for (const nlohmann::json& edge : snap.at("edges"))
                net.add_edge(edge.at(0).get<int>(), edge.at(1).get<int>());
            if (!net.connected()) throw DisconnectedError("snapshot graph is disconnected");
        }
    }
    nlohmann::json bundle;
    bundle["schema"] = snapshot_schema();
    bundle["snapshot_every"] = snaps.value("snapshot_every", 0);
    bundle["episodes"] = snaps.at("episodes");
    nn::write_json_file(run_dir + "/snapshot_bundle.json", bundle);
    log << "exported " << bundle["episodes"].size() << " episode snapshot series to " << run_dir
        << "/snapshot_bundle.json\n";
}

void cmd_compare(const std::vector<std::string>& run_dirs, const std::string& out_dir,
                 std::ostream& log) {
    if (run_dirs.size() < 2) throw ConfigError("compare needs at least two run directories");
    struct Row {
        std::string manager;
        double p;
        double avg_mean, avg_std, final_mean, final_std;
    };
    std::vector<Row> rows;
    std::optional<env::EnvConfig> reference;
    for (const std::string& dir : run_dirs) {
        const nlohmann::json summary = nn::read_json_file(dir + "/eval_summary.json");
        const ExperimentConfig config = ExperimentConfig::from_json(summary.at("config"));
        env::EnvConfig normalized = config.env;
        normalized.p_imitate = 0.0;
        if (!reference) {
            reference = normalized;
        } else if (!(normalized == *reference)) {
            throw ConfigError("run " + dir + " has a different env config");
        }
        const nlohmann::json& eval = summary.at("eval");
        rows.push_back({to_string(config.manager), config.env.p_imitate,
                        eval.at("avg_welfare_mean").get<double>(),
                        eval.at("avg_welfare_std").get<double>(),
                        eval.at("final_welfare_mean").get<double>(),
                        eval.at("final_welfare_std").get<double>()});
    }
    std::sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
        return std::tie(a.manager, a.p) < std::tie(b.manager, b.p);
    });

    std::string csv =
        "manager,p,avg_welfare_mean,avg_welfare_std,final_welfare_mean,final_welfare_std\n";
    for (const Row& r : rows) {
        csv += r.manager;
        csv += ',';
        csv += format_double(r.p);
        csv += ',';
        csv += format_double(r.avg_mean);
        csv += ',';
        csv += format_double(r.avg_std);
        csv += ',';
        csv += format_double(r.final_mean);
        csv += ',';
        csv += format_double(r.final_std);
        csv += '\n';
    }
    fs::create_directories(out_dir);
    write_text_file(out_dir + "/compare.csv", csv);

    log << std::left << std::setw(8) << "manager" << std::right << std::setw(6) << "p"
        << std::setw(18) << "avg_welfare" << std::setw(20) << "final_welfare" << "\n";
    for (const Row& r : rows) {
        std::ostringstream avg, fin;
        avg << std::fixed << std::setprecision(3) << r.avg_mean << " +/- " << r.avg_std;
        fin << std::fixed << std::setprecision(3) << r.final_mean << " +/- " << r.final_std;
        log << std::left << std::setw(8) << r.manager << std::right << std::setw(6)
            << format_double(r.p) << std::setw(18) << avg.str() << std::setw(20) << fin.str()
            << "\n";
    }
    log << "wrote " << out_dir << "/compare.csv\n";
}

}  // namespace netgov::cli
