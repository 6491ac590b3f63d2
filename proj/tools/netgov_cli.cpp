#include <iostream>

#include <CLI11.hpp>

#include "netgov/errors.hpp"
#include "netgov/experiment.hpp"

namespace {

struct CommonFlags {
    std::string config_path;
    std::string preset;
    std::string out_dir;
    std::string manager;
    std::optional<std::uint64_t> seed;
    std::optional<int> episodes;
};

void add_common(CLI::App* cmd, CommonFlags& flags) {
    cmd->add_option("--config", flags.config_path, "experiment config JSON");
    cmd->add_option("--preset", flags.preset, "desk or paper")
        ->check(CLI::IsMember({"desk", "paper"}));
    cmd->add_option("--out", flags.out_dir, "output directory");
    cmd->add_option("--manager", flags.manager, "hgrl, flat, or random")
        ->check(CLI::IsMember({"hgrl", "flat", "random"}));
    cmd->add_option("--seed", flags.seed, "master seed");
    cmd->add_option("--episodes", flags.episodes, "episode count override");
}

netgov::cli::ExperimentConfig resolve(const CommonFlags& flags, bool episodes_are_training) {
    netgov::cli::ExperimentConfig config;
    if (!flags.config_path.empty()) config = netgov::cli::load_config(flags.config_path);
    if (!flags.preset.empty()) netgov::cli::apply_preset(config, flags.preset);
    if (!flags.manager.empty()) config.manager = netgov::cli::manager_from_string(flags.manager);
    if (!flags.out_dir.empty()) config.out_dir = flags.out_dir;
    if (flags.seed) config.seed = *flags.seed;
    if (flags.episodes) {
        if (episodes_are_training)
            config.dqn.train_episodes = *flags.episodes;
        else
            config.eval_episodes = *flags.episodes;
    }
    return config;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"network governance experiments: PD agents on a dynamic graph"};
    app.require_subcommand(1);

    CommonFlags train_flags, eval_flags;
    CLI::App* train = app.add_subcommand("train", "train a manager, write checkpoints + curves");
    add_common(train, train_flags);
    CLI::App* eval = app.add_subcommand("eval", "greedy evaluation of a trained/random manager");
    add_common(eval, eval_flags);

    std::string export_dir;
    CLI::App* snapshot_export =
        app.add_subcommand("snapshot-export", "bundle eval snapshots for plotting");
    snapshot_export->add_option("--out", export_dir, "run directory containing snapshots.json")
        ->required();

    std::vector<std::string> compare_runs;
    std::string compare_out = ".";
    CLI::App* compare = app.add_subcommand("compare", "tabulate eval runs side by side");
    compare->add_option("runs", compare_runs, "eval run directories")->expected(-2);
    compare->add_option("--out", compare_out, "directory for compare.csv");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (train->parsed()) {
            netgov::cli::cmd_train(resolve(train_flags, true), std::cout);
        } else if (eval->parsed()) {
            netgov::cli::cmd_eval(resolve(eval_flags, false), std::cout);
        } else if (snapshot_export->parsed()) {
            netgov::cli::cmd_snapshot_export(export_dir, std::cout);
        } else if (compare->parsed()) {
            netgov::cli::cmd_compare(compare_runs, compare_out, std::cout);
        }
    } catch (const netgov::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
