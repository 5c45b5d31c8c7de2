#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "selfopt/environment.hpp"
#include "selfopt/errors.hpp"
#include "selfopt/harness/csv.hpp"
#include "selfopt/harness/experiment.hpp"

namespace selfopt::harness {

agent::AgentOptions agent_options_from(const AgentConfig& config) {
    agent::AgentOptions options;
    options.horizon.k_cap = config.k_cap;
    options.horizon.m_cap = config.m_cap;
    return options;
}

RunSummary simulate(const agent::ClassSpec& cls, std::size_t true_index, Step horizon,
                    std::uint64_t seed, const agent::AgentOptions& options,
                    const StepSink& sink) {
    if (true_index >= cls.size()) throw ConfigError("true environment index out of range");
    if (horizon < 1) throw ConfigError("simulation horizon must be at least 1");

    RandomSource rng(seed);
    auto cursor = cls.member(true_index).environment->cursor();
    agent::SelfOptimizingAgent agent(cls, options);

    RunSummary summary;
    summary.seed = seed;
    summary.horizon = horizon;
    summary.true_optimal_value = cls.optimal_value(true_index);

    Rational reward_sum(0);
    for (Step t = 1; t <= horizon; ++t) {
        Action action = agent.begin_step();
        StepRow row;
        row.step = t;
        row.phase = agent.phase();
        row.nu_t = agent.nu_t();
        row.nu_e = agent.nu_e() ? static_cast<std::ptrdiff_t>(*agent.nu_e()) : -1;
        row.s = agent.s();
        row.action = action;

        Percept percept = sample_percept(cursor->distribution(action), rng);
        cursor->advance(action, percept);
        agent.observe(percept);

        reward_sum += percept.reward;
        row.reward = percept.reward;
        row.running_avg = to_double(reward_sum) / static_cast<double>(t);

        switch (row.phase) {
            case agent::Phase::idle_t: ++summary.phases.idle; break;
            case agent::Phase::exploit_to_k: ++summary.phases.exploit; break;
            case agent::Phase::explore: ++summary.phases.explore; break;
            default: break;
        }
        summary.final_running_avg = row.running_avg;
        if (sink) sink(row, agent);
    }
    summary.abs_error = std::abs(summary.final_running_avg - summary.true_optimal_value);
    summary.final_s = agent.s();
    summary.final_nu_t = agent.nu_t();
    summary.prepare_count = agent.prepare_log().size();
    return summary;
}

namespace {

std::string trajectory_file_name(const ExperimentConfig& config, std::uint64_t seed) {
    return config.name + "_seed" + std::to_string(seed) + ".csv";
}

void run_one_seed(const agent::ClassSpec& cls, const ExperimentConfig& config,
                  std::size_t seed_index, const std::filesystem::path& dir,
                  RunSummary& out) {
    std::uint64_t seed = config.seeds[seed_index];
    // Rows stream into memory first so the file appears atomically complete.
    std::ostringstream rows;
    write_trajectory_header(rows);
    const Alphabet& actions = cls.action_alphabet();
    auto sink = [&](const StepRow& row, const agent::SelfOptimizingAgent&) {
        write_trajectory_row(rows, row, actions);
    };
    out = simulate(cls, config.true_index, config.horizon, seed,
                   agent_options_from(config.agent), sink);

    auto path = dir / trajectory_file_name(config, seed);
    std::ofstream file(path, std::ios::binary | std::ios::trunc);
    if (!file) throw std::runtime_error("cannot write trajectory file: " + path.string());
    file << rows.str();
}

}  // namespace

std::vector<RunSummary> run_experiment(const ExperimentConfig& config,
                                       const std::string& out_dir) {
    agent::ClassSpec cls(config.members, config.weights);
    if (config.seeds.empty()) throw ConfigError("experiment needs at least one seed");

    std::filesystem::path dir(out_dir);
    std::filesystem::create_directories(dir);

    std::vector<RunSummary> summaries(config.seeds.size());
    unsigned hw = std::thread::hardware_concurrency();
    std::size_t workers = std::min<std::size_t>(std::max(hw, 1u), config.seeds.size());

    std::atomic<std::size_t> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    auto work = [&] {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= config.seeds.size()) return;
            try {
                run_one_seed(cls, config, i, dir, summaries[i]);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
                return;
            }
        }
    };

    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);

    std::ofstream index(dir / (config.name + "_index.csv"),
                        std::ios::binary | std::ios::trunc);
    if (!index) throw std::runtime_error("cannot write index file in " + out_dir);
    write_index_header(index);
    for (const auto& summary : summaries) write_index_row(index, summary);
    return summaries;
}

}  // namespace selfopt::harness
