#include <filesystem>
#include <fstream>
#include <ostream>

#include <CLI11.hpp>

#include "selfopt/errors.hpp"
#include "selfopt/harness/cli.hpp"
#include "selfopt/harness/config.hpp"
#include "selfopt/harness/csv.hpp"
#include "selfopt/harness/experiment.hpp"
#include "selfopt/harness/necessity.hpp"
#include "selfopt/mdp/solve.hpp"

namespace selfopt::harness {

namespace {

int command_run(const std::string& config_path, const std::string& out_flag,
                Step horizon_override, bool seed_given, std::uint64_t seed,
                std::ostream& out) {
    auto config = load_experiment_config(config_path);
    if (horizon_override > 0) config.horizon = horizon_override;
    if (seed_given) config.seeds = {seed};
    std::string dir = resolve_out_dir(out_flag, config.out_dir);

    auto summaries = run_experiment(config, dir);
    out << "experiment '" << config.name << "' (" << summaries.size()
        << " seed(s), horizon " << config.horizon << ")\n";
    for (const auto& s : summaries) {
        out << "  seed " << s.seed << ": final_avg=" << format_double(s.final_running_avg)
            << " optimal=" << format_double(s.true_optimal_value)
            << " abs_err=" << format_double(s.abs_error) << " s=" << s.final_s
            << " nu_t=" << s.final_nu_t << " phases(idle/exploit/explore)="
            << s.phases.idle << "/" << s.phases.exploit << "/" << s.phases.explore
            << " prepares=" << s.prepare_count << "\n";
    }
    out << "wrote " << dir << "\n";
    return 0;
}

int command_solve(const std::string& config_path, std::ostream& out) {
    auto spec = load_mdp_spec(config_path);
    auto finite = envs::to_finite_mdp(spec);
    auto solution = mdp::solve_average_reward(finite);
    out << "gain " << format_double(solution.gain) << "\n";
    for (int s = 0; s < finite.n_states; ++s) {
        out << "  state " << s << ": action "
            << solution.policy[static_cast<std::size_t>(s)] << "  bias "
            << format_double(solution.bias[static_cast<std::size_t>(s)]) << "\n";
    }
    out << "(" << solution.iterations << " iterations, residual span "
        << format_double(solution.residual_span) << ")\n";
    return 0;
}

int command_certify(const std::string& config_path, const std::string& out_flag,
                    bool seed_given, std::uint64_t seed, Step trials_override,
                    std::ostream& out) {
    auto config = load_certify_config(config_path);
    if (trials_override > 0) config.trials = trials_override;

    std::vector<certify::AdversaryStrategy> adversaries;
    for (const auto& name : config.adversaries) {
        adversaries.push_back(name == "random"
                                  ? certify::random_uniform_adversary()
                                  : certify::worst_declared_adversary(config.subject));
    }
    auto report = certify::certify_value_stability(config.subject, config.grid,
                                                   adversaries, config.trials,
                                                   seed_given ? seed : 1);
    certify::print_report(report, out);

    std::string dir = resolve_out_dir(out_flag, config.out_dir);
    std::filesystem::create_directories(dir);
    auto path = std::filesystem::path(dir) / (config.name + "_certify.csv");
    std::ofstream file(path, std::ios::binary | std::ios::trunc);
    if (!file) throw std::runtime_error("cannot write report file: " + path.string());
    certify::write_report_csv(report, file);
    out << "wrote " << path.string() << "\n";
    return report.all_pass ? 0 : 1;
}

int command_demo(int levels, Step horizon, bool seed_given, std::uint64_t seed,
                 std::ostream& out) {
    auto report = demo_necessity(levels, horizon, seed_given ? seed : 1);
    print_report(report, out);
    return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"self-optimizing agent over declared-value-stable environment classes"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_flag;
    Step horizon = 0;
    std::uint64_t seed = 0;
    Step trials = 0;
    int levels = 3;

    auto* run = app.add_subcommand("run", "run the agent per an experiment config");
    run->add_option("--config", config_path, "experiment config (JSON)")->required();
    run->add_option("--out", out_flag, "output directory");
    run->add_option("--horizon", horizon, "override the configured horizon");
    auto* run_seed = run->add_option("--seed", seed, "run a single seed");

    auto* solve = app.add_subcommand("solve", "solve an average-reward decision process");
    solve->add_option("--config", config_path, "mdp member definition (JSON)")->required();

    auto* certify = app.add_subcommand("certify", "certify declared value stability");
    certify->add_option("--config", config_path, "certification config (JSON)")->required();
    certify->add_option("--out", out_flag, "output directory");
    auto* certify_seed = certify->add_option("--seed", seed, "base seed (default 1)");
    certify->add_option("--trials", trials, "override the configured trial count");

    auto* demo = app.add_subcommand("demo-necessity",
                                    "show why sublinear catch-up cannot be dropped");
    demo->add_option("--levels", levels, "trap levels to probe (default 3)");
    demo->add_option("--horizon", horizon, "rollout horizon (default 3000)");
    auto* demo_seed = demo->add_option("--seed", seed, "base seed (default 1)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << "\n";
        return 2;
    }

    try {
        if (run->parsed()) {
            return command_run(config_path, out_flag, horizon, run_seed->count() > 0,
                               seed, out);
        }
        if (solve->parsed()) return command_solve(config_path, out);
        if (certify->parsed()) {
            return command_certify(config_path, out_flag, certify_seed->count() > 0,
                                   seed, trials, out);
        }
        if (demo->parsed()) {
            return command_demo(levels, horizon > 0 ? horizon : 3000,
                                demo_seed->count() > 0, seed, out);
        }
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    err << "no command given\n";
    return 2;
}

}  // namespace selfopt::harness
